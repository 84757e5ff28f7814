//! Instance specs: `name:k=v,...`, `name k=v ...`, or a path to a hypergraph
//! JSON file.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use kneser_lab::corpus::seeded_hypergraph;
use kneser_lab::generators::{
    complete_graph, complete_ksubsets, cycle_graph, matchings_hypergraph, path_graph,
    stable_kneser, stable_ksubsets, usual_kneser,
};
use kneser_lab::Hypergraph;
use sha2::{Digest, Sha256};

pub const GENERATORS: &[&str] = &[
    "complete-ksubsets",
    "kneser-usual",
    "stable",
    "kneser-stable",
    "matchings",
    "edgeless",
    "cycle",
    "complete-graph",
    "path",
    "random",
];

#[derive(Clone, Debug)]
pub struct Instance {
    /// Normalized `name:k=v,...` (keys sorted) or `file:sha256=<hex>`.
    pub descriptor: String,
    pub hypergraph: Hypergraph,
    /// For Kneser generators: the base hypergraph and the rank.
    pub kneser_base: Option<(Hypergraph, usize)>,
    /// `(n, k)` when the base is the complete k-subset hypergraph.
    pub usual: Option<(usize, usize)>,
}

/// A base hypergraph `H` with the rank of the Kneser construction applied to
/// it.
#[derive(Clone, Debug)]
pub struct Based {
    pub descriptor: String,
    pub base: Hypergraph,
    pub r: usize,
    pub usual: Option<(usize, usize)>,
}

impl Instance {
    /// `H` and `r` for commands about `KG^r(H)`. Kneser specs carry their
    /// own rank; any other spec is the base itself and needs `--r`.
    pub fn based(&self, r: Option<usize>) -> Result<Based> {
        let (base, r) = match (&self.kneser_base, r) {
            (Some((base, own)), Some(given)) if *own != given => {
                bail!("{} has rank {own} but --r {given} was given", self.descriptor)
            }
            (Some((base, own)), _) => (base.clone(), *own),
            (None, Some(r)) => (self.hypergraph.clone(), r),
            (None, None) => bail!("--r is required for {}", self.descriptor),
        };
        Ok(Based {
            descriptor: self.descriptor.clone(),
            base,
            r,
            usual: self.usual,
        })
    }
}

struct Params {
    name: String,
    map: BTreeMap<String, String>,
}

impl Params {
    fn parse(text: &str) -> Result<Params> {
        let text = text.trim();
        let (name, rest): (&str, Vec<&str>) = match text.split_once(':') {
            Some((name, rest)) if !name.contains(char::is_whitespace) => {
                (name, rest.split(',').filter(|s| !s.trim().is_empty()).collect())
            }
            _ => {
                let mut parts = text.split_whitespace();
                let name = parts.next().ok_or_else(|| anyhow!("empty instance spec"))?;
                (name, parts.collect())
            }
        };
        let mut map = BTreeMap::new();
        for kv in rest {
            let (k, v) = kv
                .trim()
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key=value, got {kv:?}"))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                bail!("parameter {k} given twice");
            }
        }
        Ok(Params {
            name: name.to_string(),
            map,
        })
    }

    fn allow(&self, keys: &[&str]) -> Result<()> {
        if let Some(k) = self.map.keys().find(|k| !keys.contains(&k.as_str())) {
            bail!("{} does not take parameter {k}; expected {keys:?}", self.name);
        }
        Ok(())
    }

    fn int(&self, key: &str) -> Result<usize> {
        self.map
            .get(key)
            .ok_or_else(|| anyhow!("{} needs parameter {key}", self.name))?
            .parse()
            .with_context(|| format!("parameter {key} of {}", self.name))
    }

    fn descriptor(&self) -> String {
        let kv: Vec<String> = self.map.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}:{}", self.name, kv.join(","))
    }
}

pub fn parse_instance(text: &str, default_seed: u64) -> Result<Instance> {
    let trimmed = text.trim();
    if trimmed.ends_with(".json") || Path::new(trimmed).is_file() {
        return load_file(Path::new(trimmed));
    }
    let mut p = Params::parse(trimmed)?;
    let plain = |h: Hypergraph| (h, None, None);
    let (hypergraph, kneser_base, usual) = match p.name.as_str() {
        "complete-ksubsets" => {
            p.allow(&["n", "k"])?;
            let (n, k) = (p.int("n")?, p.int("k")?);
            (complete_ksubsets(n, k)?, None, Some((n, k)))
        }
        "kneser-usual" => {
            p.allow(&["n", "k", "r"])?;
            let (n, k, r) = (p.int("n")?, p.int("k")?, p.int("r")?);
            let kg = usual_kneser(n, k, r)?;
            (kg.hypergraph, Some((complete_ksubsets(n, k)?, r)), Some((n, k)))
        }
        "stable" => {
            p.allow(&["n", "k"])?;
            plain(stable_ksubsets(p.int("n")?, p.int("k")?))
        }
        "kneser-stable" => {
            p.allow(&["n", "k", "r"])?;
            let (n, k, r) = (p.int("n")?, p.int("k")?, p.int("r")?);
            let kg = stable_kneser(n, k, r)?;
            (kg.hypergraph, Some((stable_ksubsets(n, k), r)), None)
        }
        "matchings" => {
            p.allow(&["graph", "m", "r"])?;
            let m = p.int("m")?;
            let g = match p.map.get("graph").map(String::as_str) {
                Some("cycle") => cycle_graph(m)?,
                Some("complete") => complete_graph(m),
                Some("path") => path_graph(m),
                other => bail!("matchings needs graph=cycle|complete|path, got {other:?}"),
            };
            plain(matchings_hypergraph(&g, p.int("r")?)?)
        }
        "edgeless" => {
            p.allow(&["n"])?;
            plain(Hypergraph::edgeless(p.int("n")?))
        }
        "cycle" => {
            p.allow(&["n"])?;
            plain(cycle_graph(p.int("n")?)?)
        }
        "complete-graph" => {
            p.allow(&["n"])?;
            plain(complete_graph(p.int("n")?))
        }
        "path" => {
            p.allow(&["n"])?;
            plain(path_graph(p.int("n")?))
        }
        "random" => {
            p.allow(&["n", "p", "seed"])?;
            let prob: f64 = p
                .map
                .get("p")
                .map(|s| s.parse())
                .transpose()
                .context("parameter p of random")?
                .unwrap_or(0.3);
            let seed = match p.map.get("seed") {
                Some(s) => s.parse().context("parameter seed of random")?,
                None => default_seed,
            };
            p.map.insert("seed".into(), seed.to_string());
            p.map.insert("p".into(), prob.to_string());
            plain(seeded_hypergraph(seed, p.int("n")?, prob)?)
        }
        other => bail!("unknown generator {other:?}; known: {}", GENERATORS.join(", ")),
    };
    Ok(Instance {
        descriptor: p.descriptor(),
        hypergraph,
        kneser_base,
        usual,
    })
}

fn load_file(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let hypergraph = Hypergraph::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let digest = Sha256::digest(hypergraph.to_json().as_bytes());
    Ok(Instance {
        descriptor: format!("file:sha256={}", &hex::encode(digest)[..16]),
        hypergraph,
        kneser_base: None,
        usual: None,
    })
}

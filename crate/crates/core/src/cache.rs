//! On-disk graph cache, keyed by instance parameters plus the artifact
//! and modulus-table versions so stale encodings can never be reloaded.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::MODULUS_TABLE_VERSION;
use crate::grassmann::{GraphKind, GrassmannGraph};
use crate::report::{GraphJson, ARTIFACT_VERSION};
use crate::subspace::{Ambient, SubspaceBasis};

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "GRASSMANN_CODES_CACHE_DIR";

#[derive(Debug, Serialize, Deserialize)]
struct CacheEnvelope {
    artifact_version: String,
    modulus_table_version: u32,
    n: usize,
    k: usize,
    q: u64,
    kind: String,
    graph: GraphJson,
}

fn kind_str(kind: GraphKind) -> &'static str {
    match kind {
        GraphKind::Full => "gamma",
        GraphKind::NonDegenerate => "delta",
    }
}

pub fn cache_path(dir: &Path, n: usize, k: usize, q: u64, kind: GraphKind) -> PathBuf {
    dir.join(format!(
        "{}_n{n}_k{k}_q{q}_a{}_m{}.json",
        kind_str(kind),
        ARTIFACT_VERSION,
        MODULUS_TABLE_VERSION
    ))
}

pub fn save_graph(dir: &Path, g: &GrassmannGraph) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let env = CacheEnvelope {
        artifact_version: ARTIFACT_VERSION.to_string(),
        modulus_table_version: MODULUS_TABLE_VERSION,
        n: g.ambient.n(),
        k: g.ambient.k(),
        q: u64::from(g.ambient.q()),
        kind: kind_str(g.kind).to_string(),
        graph: GraphJson::from_graph(&g.graph),
    };
    let path = cache_path(
        dir,
        g.ambient.n(),
        g.ambient.k(),
        u64::from(g.ambient.q()),
        g.kind,
    );
    fs::write(&path, serde_json::to_vec(&env)?)?;
    Ok(path)
}

/// Loads a cached graph; `None` on a miss or any version/instance
/// mismatch.
pub fn load_graph(
    dir: &Path,
    ambient: &Ambient,
    kind: GraphKind,
) -> Result<Option<GrassmannGraph>> {
    let path = cache_path(
        dir,
        ambient.n(),
        ambient.k(),
        u64::from(ambient.q()),
        kind,
    );
    if !path.exists() {
        return Ok(None);
    }
    let bytes = fs::read(&path)?;
    let env: CacheEnvelope = serde_json::from_slice(&bytes)?;
    if env.artifact_version != ARTIFACT_VERSION
        || env.modulus_table_version != MODULUS_TABLE_VERSION
        || env.n != ambient.n()
        || env.k != ambient.k()
        || env.q != u64::from(ambient.q())
        || env.kind != kind_str(kind)
    {
        return Ok(None);
    }
    let graph = env.graph.to_graph(&format!(
        "{}({},{},{})",
        kind_str(kind),
        ambient.n(),
        ambient.k(),
        ambient.q()
    ))?;
    let field = ambient.field();
    let mut bases = Vec::with_capacity(graph.vertex_count());
    for key in graph.keys() {
        bases.push(SubspaceBasis::from_text(field, ambient.n(), key)?);
    }
    Ok(Some(GrassmannGraph::from_parts(
        ambient.clone(),
        kind,
        graph,
        bases,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Caps;

    #[test]
    fn round_trip_is_structurally_identical() {
        let dir = std::env::temp_dir().join(format!("gc-cache-test-{}", std::process::id()));
        let a = Ambient::new(4, 2, 3).unwrap();
        let g = GrassmannGraph::build(&a, GraphKind::NonDegenerate, &Caps::default()).unwrap();
        save_graph(&dir, &g).unwrap();
        let loaded = load_graph(&dir, &a, GraphKind::NonDegenerate)
            .unwrap()
            .expect("cache hit");
        assert_eq!(loaded.graph, g.graph);
        assert_eq!(loaded.bases, g.bases);
        // a different kind misses
        assert!(load_graph(&dir, &a, GraphKind::Full).unwrap().is_none());
        fs::remove_dir_all(&dir).ok();
    }
}

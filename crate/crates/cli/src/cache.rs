//! Lazily built, persisted order sieve.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use maxdet::sieve::{build_order_set, OrderSet, RuleSet};

fn default_path(limit: u64, rules: RuleSet) -> PathBuf {
    let tag = rules.ids().iter().map(u8::to_string).collect::<Vec<_>>().join("-");
    std::env::temp_dir().join("maxdet").join(format!("sieve-{limit}-r{tag}.bin"))
}

/// Sieve to exactly `limit`, read from the cache when one with the same
/// limit exists, otherwise built and written back. The cache holds
/// membership only, so callers that report rule provenance always rebuild.
pub fn load_sieve(
    limit: u64,
    rules: RuleSet,
    path: Option<PathBuf>,
    rebuild: bool,
    provenance: bool,
) -> Result<OrderSet> {
    let path = path.unwrap_or_else(|| default_path(limit, rules));
    if !rebuild && !provenance && path.exists() {
        match OrderSet::read_cache(&path) {
            Ok(set) if set.limit() == limit => {
                log::info!("sieve to {limit} read from {}", path.display());
                return Ok(set);
            }
            Ok(set) => log::info!("cache {} has limit {}, rebuilding", path.display(), set.limit()),
            Err(e) => log::warn!("ignoring unreadable cache {}: {e}", path.display()),
        }
    }
    let start = Instant::now();
    let set = build_order_set(limit, rules).context("building the order sieve")?;
    log::info!("sieve to {limit} built in {:.2?} ({} orders)", start.elapsed(), set.len());
    if let Err(e) = set.write_cache(&path) {
        log::warn!("could not write sieve cache {}: {e}", path.display());
    }
    Ok(set)
}

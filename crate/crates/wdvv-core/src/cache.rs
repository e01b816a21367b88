//! Disk cache for branch expansions: canonical text serialization keyed by a
//! content hash of the inputs (the Riccati equation and the expansion
//! parameters), so the expensive step never silently recomputes and never
//! reuses stale data. A lock file serializes writers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::exact::parse;
use crate::lax::{expand_branch, riccati_in_flat_coordinates, BranchExpansion};

const FORMAT_VERSION: u32 = 1;
/// Deepest depth probed when looking for a cached expansion that covers a
/// shallower request.
const MAX_PROBE_DEPTH: usize = 8;

/// Cache directory: `WDVV_CACHE_DIR` when set, otherwise `wdvv-cache` under
/// the system temporary directory.
pub fn cache_dir() -> PathBuf {
    match std::env::var_os("WDVV_CACHE_DIR") {
        Some(d) => PathBuf::from(d),
        None => std::env::temp_dir().join("wdvv-cache"),
    }
}

/// Content-hash stem of the cache entry for one (system, branch, depth)
/// triple: the hash covers the serialized Riccati equation so that any change
/// to the upstream derivation invalidates the entry.
fn entry_stem(n_roots: usize, branch: usize, depth: usize) -> String {
    let mut h = Sha256::new();
    h.update(format!("wdvv-expansion {FORMAT_VERSION}\n").as_bytes());
    h.update(format!("n {n_roots} branch {branch} depth {depth}\n").as_bytes());
    h.update(parse::print(&riccati_in_flat_coordinates(n_roots)).as_bytes());
    let digest = h.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("expand-n{n_roots}-b{branch}-d{depth}-{}", &hex[..16])
}

fn serialize(e: &BranchExpansion) -> String {
    let mut out = String::new();
    out.push_str(&format!("wdvv-expansion {FORMAT_VERSION}\n"));
    out.push_str(&format!(
        "n {} branch {} depth {}\n",
        e.n_roots,
        e.branch,
        e.densities.len() - 1
    ));
    out.push_str(&format!("root {}\n", parse::print(&e.root)));
    for d in &e.densities {
        out.push_str(&parse::print(d));
        out.push('\n');
    }
    out
}

fn deserialize(text: &str, n_roots: usize, branch: usize) -> Option<BranchExpansion> {
    let mut lines = text.lines();
    let header = lines.next()?;
    if header != format!("wdvv-expansion {FORMAT_VERSION}") {
        return None;
    }
    let params = lines.next()?;
    let mut it = params.split_whitespace();
    let (n, b, depth): (usize, usize, usize) = (
        (it.next()? == "n").then(|| it.next()).flatten()?.parse().ok()?,
        (it.next()? == "branch").then(|| it.next()).flatten()?.parse().ok()?,
        (it.next()? == "depth").then(|| it.next()).flatten()?.parse().ok()?,
    );
    if n != n_roots || b != branch {
        return None;
    }
    let root_line = lines.next()?;
    let root = parse::parse(root_line.strip_prefix("root ")?).ok()?;
    let mut densities = Vec::with_capacity(depth + 1);
    for line in lines {
        densities.push(parse::parse(line).ok()?);
    }
    if densities.len() != depth + 1 {
        return None;
    }
    Some(BranchExpansion {
        n_roots,
        branch,
        root,
        densities,
    })
}

/// Exclusive lock on the cache directory, released on drop.
struct DirLock {
    path: PathBuf,
}

impl DirLock {
    fn acquire(dir: &Path) -> std::io::Result<DirLock> {
        let path = dir.join("lock");
        let deadline = std::time::Instant::now() + std::time::Duration::from_secs(120);
        loop {
            match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    let _ = writeln!(f, "{}", std::process::id());
                    return Ok(DirLock { path });
                }
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    if std::time::Instant::now() > deadline {
                        // a crashed writer left the lock behind; break it
                        let _ = fs::remove_file(&path);
                    } else {
                        std::thread::sleep(std::time::Duration::from_millis(50));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

/// Expand a branch, reusing (and truncating) any cached expansion of the same
/// inputs at the requested depth or deeper; on a miss the result is computed
/// and written back atomically.
pub fn expand_branch_cached(n_roots: usize, branch: usize, depth: usize) -> BranchExpansion {
    let dir = cache_dir();
    let _ = fs::create_dir_all(&dir);
    for d in depth..=MAX_PROBE_DEPTH.max(depth) {
        let path = dir.join(format!("{}.txt", entry_stem(n_roots, branch, d)));
        let Ok(text) = fs::read_to_string(&path) else {
            continue;
        };
        if let Some(mut e) = deserialize(&text, n_roots, branch) {
            e.densities.truncate(depth + 1);
            return e;
        }
    }
    let e = expand_branch(n_roots, branch, depth);
    if let Ok(_lock) = DirLock::acquire(&dir) {
        let path = dir.join(format!("{}.txt", entry_stem(n_roots, branch, depth)));
        let tmp = dir.join(format!(".tmp-{}", std::process::id()));
        if fs::write(&tmp, serialize(&e)).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_reuse() {
        let tmp = std::env::temp_dir().join(format!("wdvv-cache-test-{}", std::process::id()));
        // SAFETY: tests in this binary run on independent cache keys
        unsafe { std::env::set_var("WDVV_CACHE_DIR", &tmp) };
        let a = expand_branch_cached(3, 1, 1);
        let b = expand_branch_cached(3, 1, 1);
        assert_eq!(a, b);
        // the shallower request must reuse the deeper entry
        let c = expand_branch_cached(3, 1, 0);
        assert_eq!(c.densities, a.densities[..1].to_vec());
        let direct = expand_branch(3, 1, 1);
        assert_eq!(a, direct);
        let _ = fs::remove_dir_all(&tmp);
    }

    #[test]
    fn serialization_roundtrip() {
        let e = expand_branch(3, 2, 0);
        let text = serialize(&e);
        let back = deserialize(&text, 3, 2).unwrap();
        assert_eq!(e, back);
    }
}

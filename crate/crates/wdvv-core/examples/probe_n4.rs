use std::time::Instant;
use wdvv_core::lax::expand_branch;

fn main() {
    for depth in [2usize, 3] {
        let t = Instant::now();
        let e = expand_branch(4, 1, depth);
        println!(
            "branch 1 depth {depth}: {:?}, h{depth} terms {}",
            t.elapsed(),
            e.densities[depth].num_terms()
        );
    }
}

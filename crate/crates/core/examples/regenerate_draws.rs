//! Rewrites `data/draws.json` from the fixed seed.

use piq_core::registry::{generate_draws, DRAWS_PER_IDENTITY, DRAW_SEED};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/draws.json");
    let set = generate_draws(DRAW_SEED, DRAWS_PER_IDENTITY);
    std::fs::write(path, set.to_json()).expect("write draws");
    println!("wrote {path}");
}

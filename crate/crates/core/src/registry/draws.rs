use std::collections::BTreeMap;

use dashu_int::IBig;
use dashu_ratio::RBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{eval_terminating, IdentityParams, TerminatingId};
use crate::error::{Error, Result};
use crate::numerics::Exact;

pub const DRAW_SEED: u64 = 0x5eed_2718;
pub const DRAWS_PER_IDENTITY: usize = 20;
const MAX_N: usize = 6;
const MAX_ATTEMPTS: usize = 10_000;

const COMMITTED: &str = include_str!("../../data/draws.json");

/// Seeded rational parameter points for the terminating identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawSet {
    pub seed: u64,
    pub per_identity: usize,
    pub draws: BTreeMap<String, Vec<BTreeMap<String, String>>>,
}

impl DrawSet {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("draws serialize");
        s.push('\n');
        s
    }

    pub fn params(&self, id: &str) -> Result<Vec<IdentityParams>> {
        let rows = self.draws.get(id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))?;
        rows.iter().map(IdentityParams::from_strings).collect()
    }
}

/// The draws shipped with the crate.
pub fn committed_draws() -> Result<DrawSet> {
    serde_json::from_str(COMMITTED).map_err(|e| Error::Catalog(format!("draws.json: {e}")))
}

fn small_rational(rng: &mut ChaCha8Rng) -> RBig {
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-9i64..=9);
    }
    let den = rng.gen_range(1i64..=9);
    RBig::from_parts_signed(IBig::from(num), IBig::from(den))
}

fn base(rng: &mut ChaCha8Rng) -> RBig {
    let den = rng.gen_range(2i64..=9);
    let num = rng.gen_range(1..den);
    RBig::from_parts_signed(IBig::from(num), IBig::from(den))
}

/// Draws `per_identity` pole-free points for every terminating identity.
/// A point is redrawn until the exact evaluation of both sides succeeds.
pub fn generate_draws(seed: u64, per_identity: usize) -> DrawSet {
    let mut draws = BTreeMap::new();
    for (slot, tid) in TerminatingId::ALL.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(slot as u64));
        let mut rows = Vec::with_capacity(per_identity);
        let mut attempts = 0;
        while rows.len() < per_identity {
            attempts += 1;
            assert!(attempts < MAX_ATTEMPTS, "no pole-free point found for {}", tid.key());
            let mut p = IdentityParams::new();
            p.set_n(rng.gen_range(1..=MAX_N));
            for name in tid.drawn_params() {
                let v = if *name == "q" { base(&mut rng) } else { small_rational(&mut rng) };
                p.set_rational(name, v);
            }
            let get = |name: &str| p.exact(name);
            if eval_terminating::<Exact>(tid, &get, &p).is_ok() {
                rows.push(p.to_strings());
            }
        }
        draws.insert(tid.key().to_string(), rows);
    }
    DrawSet { seed, per_identity, draws }
}

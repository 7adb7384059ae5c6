use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Terrain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Profile {
    /// Integer steps: dx in 1..=3, dy in -4..=4.
    RandomWalk,
    /// Alternating peaks and valley floors, the peaks on a convex arc so that
    /// guards on one slope see into many valleys.
    Valleys,
    /// Strictly increasing slopes; every pair of points is mutually visible.
    Convex,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::RandomWalk, Profile::Valleys, Profile::Convex];

    pub fn as_str(self) -> &'static str {
        match self {
            Profile::RandomWalk => "random-walk",
            Profile::Valleys => "valleys",
            Profile::Convex => "convex",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Profile::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown profile {s:?}")))
    }
}

/// Deterministic terrain with `n` vertices for `(n, seed, profile)`.
pub fn generate(n: usize, seed: u64, profile: Profile) -> Result<Terrain> {
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(i64, i64)> = match profile {
        Profile::RandomWalk => {
            let (mut x, mut y) = (0i64, 0i64);
            (0..n)
                .map(|_| {
                    let p = (x, y);
                    x += rng.gen_range(1..=3);
                    y += rng.gen_range(-4..=4);
                    p
                })
                .collect()
        }
        Profile::Convex => {
            let (mut x, mut y) = (0i64, 0i64);
            let mut slope = -(n as i64) - rng.gen_range(0..=2);
            (0..n)
                .map(|_| {
                    let p = (x, y);
                    let dx = rng.gen_range(1..=2);
                    x += dx;
                    y += slope * dx;
                    slope += rng.gen_range(1..=2);
                    p
                })
                .collect()
        }
        Profile::Valleys => {
            // Odd indices are valley floors. A floor sits at least 2n below
            // the arc while neighbouring arc heights differ by at most n.
            let n_i = n as i64;
            let c = (n_i - 1) / 2;
            (0..n_i)
                .map(|k| {
                    let x = 3 * k + rng.gen_range(0..=1);
                    let arc = (k - c) * (k - c) + 4 * n_i;
                    let y = if k % 2 == 1 {
                        arc - n_i * rng.gen_range(2..=3)
                    } else {
                        arc + rng.gen_range(0..=1)
                    };
                    (x, y)
                })
                .collect()
        }
    };
    Terrain::new(
        pts.into_iter()
            .map(|(x, y)| Point2::from_ints(x, y))
            .collect(),
    )
}

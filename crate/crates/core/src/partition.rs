//! Tagged partitions and the rules that pick the tags.
//!
//! Tags live in the *closed* cells `[y_j, y_{j+1}]`; that convention lets a
//! tag sit exactly on a grid point, which the jump-aware policies need.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A subdivision `a = y_0 < y_1 < ... < y_l = b` with one tag per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    grid: Vec<f64>,
    tags: Vec<f64>,
}

impl Partition {
    pub fn new(grid: Vec<f64>, tags: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.iter().any(|y| !y.is_finite()) {
            return Err(Error::InvalidGrid);
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid);
        }
        if tags.len() != grid.len() - 1 {
            return Err(Error::InvalidGrid);
        }
        for (j, &tag) in tags.iter().enumerate() {
            if !(grid[j] <= tag && tag <= grid[j + 1]) {
                return Err(Error::TagOutsideCell {
                    tag,
                    low: grid[j],
                    high: grid[j + 1],
                });
            }
        }
        Ok(Partition { grid, tags })
    }

    /// Builds the partition by applying a tag policy to a bare grid.
    pub fn with_policy(grid: Vec<f64>, policy: &TagPolicy, jump_locations: &[f64]) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidGrid);
        }
        let tags = policy.tags_for(&grid, jump_locations);
        Partition::new(grid, tags)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn tags(&self) -> &[f64] {
        &self.tags
    }

    pub fn cells(&self) -> usize {
        self.grid.len() - 1
    }

    /// The modulus: the widest cell.
    pub fn mesh(&self) -> f64 {
        self.grid
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }
}

/// Rule selecting the tag within each cell.
///
/// The jump-aware rules need the integrator's jump locations: in a cell whose
/// closure meets a jump `x_h` they pick the tag at `x_h`, strictly left of it,
/// or strictly right of it (inside the cell); everywhere else, and whenever
/// the requested side has no room inside the cell, they fall back to the
/// midpoint. Randomized tags are drawn from a ChaCha stream seeded from the
/// policy's seed and the cell count, so equal inputs give equal tags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TagPolicy {
    Left,
    Right,
    Midpoint,
    RandomUniform { seed: u64 },
    AtJump,
    LeftOfJump,
    RightOfJump,
}

impl TagPolicy {
    /// All seven policies, with the given seed for the randomized one.
    pub fn all(seed: u64) -> [TagPolicy; 7] {
        [
            TagPolicy::Left,
            TagPolicy::Right,
            TagPolicy::Midpoint,
            TagPolicy::RandomUniform { seed },
            TagPolicy::AtJump,
            TagPolicy::LeftOfJump,
            TagPolicy::RightOfJump,
        ]
    }

    pub fn tags_for(&self, grid: &[f64], jump_locations: &[f64]) -> Vec<f64> {
        let cells = grid.len().saturating_sub(1);
        let mut rng = match self {
            TagPolicy::RandomUniform { seed } => Some(ChaCha8Rng::seed_from_u64(
                seed ^ (cells as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            )),
            _ => None,
        };
        (0..cells)
            .map(|j| {
                let (low, high) = (grid[j], grid[j + 1]);
                let midpoint = low + (high - low) * 0.5;
                match self {
                    TagPolicy::Left => low,
                    TagPolicy::Right => high,
                    TagPolicy::Midpoint => midpoint,
                    TagPolicy::RandomUniform { .. } => {
                        let u: f64 = rng.as_mut().unwrap().gen();
                        low + (high - low) * u
                    }
                    TagPolicy::AtJump | TagPolicy::LeftOfJump | TagPolicy::RightOfJump => {
                        let jump = first_jump_in_cell(jump_locations, low, high);
                        match (self, jump) {
                            (TagPolicy::AtJump, Some(x)) => x,
                            (TagPolicy::LeftOfJump, Some(x)) if x > low => low + (x - low) * 0.5,
                            (TagPolicy::RightOfJump, Some(x)) if x < high => x + (high - x) * 0.5,
                            _ => midpoint,
                        }
                    }
                }
            })
            .collect()
    }
}

fn first_jump_in_cell(jump_locations: &[f64], low: f64, high: f64) -> Option<f64> {
    let idx = jump_locations.partition_point(|&x| x < low);
    jump_locations.get(idx).copied().filter(|&x| x <= high)
}

/// How refinement grids are generated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefinementStrategy {
    /// `2^n` equal cells at level n.
    UniformDyadic,
    /// Nested random refinements: each level splits cells at seeded random
    /// interior points until every width is at most `(b-a)/2^n`.
    RandomNested { seed: u64 },
}

/// Grids for levels `n = 1..=n_max`, cell counts growing without bound and
/// meshes strictly decreasing to zero (mesh at level n is at most
/// `(b-a)/2^n`, hence at most a constant multiple of `(b-a)/cells`).
pub fn refinement_sequence(
    a: f64,
    b: f64,
    strategy: RefinementStrategy,
    n_max: u32,
) -> Result<Vec<Vec<f64>>> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInterval { a, b });
    }
    let mut out = Vec::with_capacity(n_max as usize);
    match strategy {
        RefinementStrategy::UniformDyadic => {
            for n in 1..=n_max {
                out.push(uniform_grid(a, b, 1usize << n));
            }
        }
        RefinementStrategy::RandomNested { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut grid = vec![a, b];
            for n in 1..=n_max {
                let target = (b - a) / (1u64 << n) as f64;
                loop {
                    let mut next = Vec::with_capacity(grid.len() * 2);
                    let mut split_any = false;
                    for w in grid.windows(2) {
                        next.push(w[0]);
                        if w[1] - w[0] > target {
                            let u: f64 = rng.gen_range(0.35..0.65);
                            let cut = w[0] + (w[1] - w[0]) * u;
                            if cut > w[0] && cut < w[1] {
                                next.push(cut);
                                split_any = true;
                            }
                        }
                    }
                    next.push(b);
                    grid = next;
                    if !split_any {
                        break;
                    }
                }
                // All widths <= target already: split the widest cells so the
                // mesh still strictly decreases and the cell count grows.
                let mesh = grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
                if out
                    .last()
                    .map_or(false, |prev: &Vec<f64>| prev.len() == grid.len())
                {
                    let mut next = Vec::with_capacity(grid.len() + 4);
                    for w in grid.windows(2) {
                        next.push(w[0]);
                        if w[1] - w[0] == mesh {
                            next.push(w[0] + (w[1] - w[0]) * 0.5);
                        }
                    }
                    next.push(b);
                    grid = next;
                }
                out.push(grid.clone());
            }
        }
    }
    Ok(out)
}

/// Uniform grid with `cells` equal cells on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, cells: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=cells)
        .map(|k| a + (b - a) * (k as f64 / cells as f64))
        .collect();
    grid[0] = a;
    *grid.last_mut().unwrap() = b;
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_sequence_shapes() {
        let grids = refinement_sequence(0.0, 1.0, RefinementStrategy::UniformDyadic, 3).unwrap();
        let cells: Vec<usize> = grids.iter().map(|g| g.len() - 1).collect();
        assert_eq!(cells, vec![2, 4, 8]);
        for (grid, mesh) in grids.iter().zip([0.5, 0.25, 0.125]) {
            let p = Partition::with_policy(grid.clone(), &TagPolicy::Midpoint, &[]).unwrap();
            assert_eq!(p.mesh(), mesh);
        }
    }

    #[test]
    fn random_nested_is_reproducible() {
        let s = RefinementStrategy::RandomNested { seed: 7 };
        let g1 = refinement_sequence(0.0, 1.0, s, 6).unwrap();
        let g2 = refinement_sequence(0.0, 1.0, s, 6).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn random_nested_meshes_shrink_and_nest() {
        for seed in 0..1000u64 {
            let grids =
                refinement_sequence(-1.0, 2.0, RefinementStrategy::RandomNested { seed }, 6)
                    .unwrap();
            let mut prev_mesh = f64::INFINITY;
            let mut prev_cells = 0usize;
            for (n, grid) in grids.iter().enumerate() {
                let cells = grid.len() - 1;
                let mesh = grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
                assert!(mesh <= prev_mesh);
                assert!(cells > prev_cells);
                assert!(mesh <= 3.0 / (1u64 << (n + 1)) as f64 + 1e-15);
                assert!(mesh * cells as f64 <= 4.0 * 3.0);
                prev_mesh = mesh;
                prev_cells = cells;
            }
        }
    }

    #[test]
    fn random_nested_levels_are_nested() {
        let grids =
            refinement_sequence(0.0, 1.0, RefinementStrategy::RandomNested { seed: 3 }, 5).unwrap();
        for pair in grids.windows(2) {
            for point in &pair[0] {
                assert!(pair[1].contains(point));
            }
        }
    }

    #[test]
    fn invalid_interval_is_rejected() {
        assert!(refinement_sequence(1.0, 1.0, RefinementStrategy::UniformDyadic, 3).is_err());
    }

    #[test]
    fn tags_stay_in_closed_cells() {
        let grid = vec![0.0, 1.0, 2.0, 3.0];
        for policy in TagPolicy::all(42) {
            let tags = policy.tags_for(&grid, &[1.0]);
            Partition::new(grid.clone(), tags).unwrap();
        }
    }

    #[test]
    fn jump_aware_policies() {
        let grid = vec![-1.0, -0.3, 0.4, 1.0];
        let jumps = [0.0];
        assert_eq!(TagPolicy::AtJump.tags_for(&grid, &jumps)[1], 0.0);
        let left = TagPolicy::LeftOfJump.tags_for(&grid, &jumps)[1];
        assert!(left > -0.3 && left < 0.0);
        let right = TagPolicy::RightOfJump.tags_for(&grid, &jumps)[1];
        assert!(right > 0.0 && right < 0.4);
        // No room on the requested side: fall back to the midpoint.
        let grid2 = vec![-1.0, 0.0, 1.0];
        let t = TagPolicy::RightOfJump.tags_for(&grid2, &jumps)[1];
        assert!(t > 0.0 && t < 1.0);
        let t = TagPolicy::LeftOfJump.tags_for(&grid2, &jumps)[1];
        assert_eq!(t, -0.5);
    }

    #[test]
    fn random_tags_are_deterministic_per_seed() {
        let grid = uniform_grid(0.0, 1.0, 16);
        let p = TagPolicy::RandomUniform { seed: 11 };
        assert_eq!(p.tags_for(&grid, &[]), p.tags_for(&grid, &[]));
        let q = TagPolicy::RandomUniform { seed: 12 };
        assert_ne!(p.tags_for(&grid, &[]), q.tags_for(&grid, &[]));
    }

    #[test]
    fn tag_outside_cell_rejected() {
        let err = Partition::new(vec![0.0, 1.0], vec![2.0]);
        assert!(matches!(err, Err(Error::TagOutsideCell { .. })));
    }
}

//! Dense indexing of the L1 ball `{p : |p|_1 <= R}` in `Z^d`.
//!
//! Points are stored in lexicographic order. For each prefix `(x_1..x_{d-1})`
//! the last coordinate fills a contiguous row, so the index of a point is the
//! row start plus an offset; row starts live in a dense table over the prefix box.

use crate::error::{resource, Result};

pub(crate) const NONE: u32 = u32::MAX;

pub(crate) struct Ball {
    pub d: usize,
    pub radius: usize,
    pub len: usize,
    side: usize,
    row_start: Vec<u32>,
    pub norms: Vec<u32>,
    /// `2d` neighbour indices per point, `NONE` when outside the ball.
    pub nbrs: Vec<u32>,
}

/// Number of lattice points with L1 norm at most `r` in dimension `d`.
pub(crate) fn ball_size(d: usize, r: usize) -> u128 {
    // sizes[k] = number of points of norm <= k in the current dimension
    let mut sizes: Vec<u128> = vec![1; r + 1];
    for _ in 0..d {
        let prev = sizes.clone();
        for k in 0..=r {
            let mut s = prev[k];
            for j in 1..=k {
                s += 2 * prev[k - j];
            }
            sizes[k] = s;
        }
    }
    sizes[r]
}

impl Ball {
    /// Bytes used by the index structures alone.
    pub fn estimate_bytes(d: usize, radius: usize) -> u128 {
        let len = ball_size(d, radius);
        let side = (2 * radius + 1) as u128;
        let rows = side.pow(d as u32 - 1);
        4 * rows + 4 * len + 4 * 2 * d as u128 * len
    }

    pub fn new(d: usize, radius: usize) -> Result<Ball> {
        let len = ball_size(d, radius);
        if len >= NONE as u128 {
            return resource(format!(
                "ball of radius {radius} in dimension {d} has {len} points, above the u32 index range"
            ));
        }
        let len = len as usize;
        let side = 2 * radius + 1;
        let r = radius as i64;
        let pd = d - 1;
        let nrows = side.pow(pd as u32);

        let mut row_start = vec![NONE; nrows];
        let mut prefix = vec![-r; pd];
        let mut next = 0usize;
        for slot in row_start.iter_mut() {
            let s: i64 = prefix.iter().map(|x| x.abs()).sum();
            if s <= r {
                *slot = next as u32;
                next += (2 * (r - s) + 1) as usize;
            }
            advance(&mut prefix, r);
        }
        debug_assert_eq!(next, len);

        let mut ball = Ball {
            d,
            radius,
            len,
            side,
            row_start,
            norms: vec![0; len],
            nbrs: vec![NONE; len * 2 * d],
        };

        let mut prefix = vec![-r; pd];
        let mut p = vec![0i64; d];
        for row in 0..nrows {
            let start = ball.row_start[row];
            if start != NONE {
                let s: i64 = prefix.iter().map(|x| x.abs()).sum();
                let span = r - s;
                p[..pd].copy_from_slice(&prefix);
                for last in -span..=span {
                    p[pd] = last;
                    let idx = start as usize + (last + span) as usize;
                    ball.norms[idx] = (s + last.abs()) as u32;
                    for axis in 0..d {
                        for (k, delta) in [(0, 1i64), (1, -1i64)] {
                            p[axis] += delta;
                            ball.nbrs[idx * 2 * d + 2 * axis + k] =
                                ball.index(&p).map_or(NONE, |i| i as u32);
                            p[axis] -= delta;
                        }
                    }
                }
            }
            advance(&mut prefix, r);
        }
        Ok(ball)
    }

    pub fn index(&self, p: &[i64]) -> Option<usize> {
        debug_assert_eq!(p.len(), self.d);
        let r = self.radius as i64;
        let s: i64 = p.iter().map(|x| x.abs()).sum();
        if s > r {
            return None;
        }
        let pd = self.d - 1;
        let mut row = 0usize;
        for &x in &p[..pd] {
            row = row * self.side + (x + r) as usize;
        }
        let prefix_norm = s - p[pd].abs();
        let span = r - prefix_norm;
        Some(self.row_start[row] as usize + (p[pd] + span) as usize)
    }

    /// Calls `f(index, coords)` for every point in index order.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, &[i64])) {
        let r = self.radius as i64;
        let pd = self.d - 1;
        let mut prefix = vec![-r; pd];
        let mut p = vec![0i64; self.d];
        for row in 0..self.row_start.len() {
            let start = self.row_start[row];
            if start != NONE {
                let s: i64 = prefix.iter().map(|x| x.abs()).sum();
                let span = r - s;
                p[..pd].copy_from_slice(&prefix);
                for last in -span..=span {
                    p[pd] = last;
                    f(start as usize + (last + span) as usize, &p);
                }
            }
            advance(&mut prefix, r);
        }
    }
}

/// Mixed-radix increment over `[-r, r]^k`, last coordinate fastest.
fn advance(prefix: &mut [i64], r: i64) {
    for x in prefix.iter_mut().rev() {
        if *x < r {
            *x += 1;
            return;
        }
        *x = -r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_known_counts() {
        assert_eq!(ball_size(1, 3), 7);
        assert_eq!(ball_size(2, 1), 5);
        assert_eq!(ball_size(2, 2), 13);
        assert_eq!(ball_size(3, 1), 7);
        assert_eq!(ball_size(3, 2), 25);
    }

    #[test]
    fn index_is_a_bijection_with_symmetric_neighbours() {
        for d in 1..=4 {
            let b = Ball::new(d, 4).unwrap();
            let mut seen = vec![false; b.len];
            b.for_each_point(|i, p| {
                assert_eq!(b.index(p), Some(i));
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(b.norms[i] as i64, p.iter().map(|x| x.abs()).sum::<i64>());
            });
            assert!(seen.iter().all(|&s| s));
            for i in 0..b.len {
                for k in 0..2 * d {
                    let j = b.nbrs[i * 2 * d + k];
                    if j != NONE {
                        // stepping back along the same axis returns to i
                        assert_eq!(b.nbrs[j as usize * 2 * d + (k ^ 1)], i as u32);
                    }
                }
            }
        }
    }
}

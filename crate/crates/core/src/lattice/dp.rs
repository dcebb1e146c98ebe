//! Layered walk-count DP over an L1 ball.
//!
//! Layer `n` holds, for every point, the number of walks of length `n` from
//! the origin ending there that never stand on a forbidden point at steps
//! `1..=n`. Layers are computed in pull form with two buffers.

use num_bigint::BigUint;
use rayon::prelude::*;

use super::ball::{Ball, NONE};
use super::count::{bits_needed, Count, U256};
use super::Limits;
use crate::error::{resource, Result};

pub(crate) struct DpPlan<'a> {
    pub ball: &'a Ball,
    pub forbidden: Vec<usize>,
    pub steps: usize,
    /// Points whose layer values are recorded.
    pub track: Vec<usize>,
    /// Points whose entry counts (sum over neighbours of the previous layer) are recorded.
    pub entry: Vec<usize>,
    pub total: bool,
    pub keep_layers: bool,
}

#[derive(Default)]
pub(crate) struct DpOutput {
    pub values: Vec<Vec<BigUint>>,
    pub entries: Vec<Vec<BigUint>>,
    pub totals: Vec<BigUint>,
    pub layers: Vec<Vec<BigUint>>,
}

fn count_bytes(bits: u64) -> u64 {
    match bits {
        0..=64 => 8,
        65..=128 => 16,
        129..=256 => 32,
        _ => 24 + bits.div_ceil(64) * 8,
    }
}

/// Rough peak memory of a DP run, checked against the budget before allocating.
pub(crate) fn estimate_bytes(d: usize, radius: usize, steps: usize, keep_layers: bool) -> u128 {
    let len = super::ball::ball_size(d, radius);
    let bits = bits_needed(d, steps);
    let mut bytes = Ball::estimate_bytes(d, radius) + 2 * len * count_bytes(bits) as u128;
    if keep_layers {
        bytes += (steps as u128 + 1) * len * (24 + bits.div_ceil(8) as u128);
    }
    bytes
}

pub(crate) fn check_budget(
    d: usize,
    radius: usize,
    steps: usize,
    keep_layers: bool,
    limits: &Limits,
) -> Result<()> {
    let need = estimate_bytes(d, radius, steps, keep_layers);
    if need > limits.memory_bytes as u128 {
        return resource(format!(
            "walk DP for d={d}, radius {radius}, {steps} steps needs about {need} bytes; budget is {}",
            limits.memory_bytes
        ));
    }
    Ok(())
}

pub(crate) fn run(plan: &DpPlan) -> DpOutput {
    match bits_needed(plan.ball.d, plan.steps) {
        0..=64 => run_typed::<u64>(plan),
        65..=128 => run_typed::<u128>(plan),
        129..=256 => run_typed::<U256>(plan),
        _ => run_typed::<BigUint>(plan),
    }
}

fn neighbour_sum<T: Count>(ball: &Ball, layer: &[T], i: usize) -> T {
    let deg = 2 * ball.d;
    let mut acc = T::zero();
    for &j in &ball.nbrs[i * deg..(i + 1) * deg] {
        if j != NONE {
            let v = &layer[j as usize];
            if !v.is_zero() {
                acc.add_assign(v);
            }
        }
    }
    acc
}

fn run_typed<T: Count>(plan: &DpPlan) -> DpOutput {
    let ball = plan.ball;
    let origin = ball.index(&vec![0; ball.d]).expect("origin is in every ball");
    let mut forbidden = vec![false; ball.len];
    for &f in &plan.forbidden {
        forbidden[f] = true;
    }
    let mut cur: Vec<T> = vec![T::zero(); ball.len];
    let mut nxt: Vec<T> = vec![T::zero(); ball.len];
    cur[origin] = T::one();

    let mut out = DpOutput {
        values: vec![Vec::with_capacity(plan.steps + 1); plan.track.len()],
        entries: vec![vec![BigUint::default()]; plan.entry.len()],
        ..Default::default()
    };

    for n in 0..=plan.steps {
        for (k, &i) in plan.track.iter().enumerate() {
            out.values[k].push(cur[i].to_big());
        }
        if plan.total {
            let mut t = T::zero();
            for v in &cur {
                if !v.is_zero() {
                    t.add_assign(v);
                }
            }
            out.totals.push(t.to_big());
        }
        if plan.keep_layers {
            out.layers.push(cur.iter().map(Count::to_big).collect());
        }
        if n == plan.steps {
            break;
        }
        for (k, &i) in plan.entry.iter().enumerate() {
            out.entries[k].push(neighbour_sum(ball, &cur, i).to_big());
        }
        let step = n + 1;
        let norms = &ball.norms;
        let cur_ref = &cur;
        let forbidden = &forbidden;
        nxt.par_iter_mut()
            .with_min_len(4096)
            .enumerate()
            .for_each(|(i, slot)| {
                let nm = norms[i] as usize;
                if forbidden[i] {
                    *slot = T::zero();
                    return;
                }
                // Entries of the other parity, or beyond reach, are already zero.
                if nm > step || (nm ^ step) & 1 == 1 {
                    return;
                }
                *slot = neighbour_sum(ball, cur_ref, i);
            });
        std::mem::swap(&mut cur, &mut nxt);
    }
    out
}

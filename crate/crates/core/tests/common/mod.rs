//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use polar_koszul::{Monomial, MonomialIdeal, VariableSpace};
use rand::Rng;

/// Rank over GF(p) by plain row reduction on `i64`s.
pub fn rank_mod_p(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][c].rem_euclid(p) != 0) else {
            continue;
        };
        rows.swap(rank, r);
        let inv = pow_mod(rows[rank][c].rem_euclid(p), p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        for r in 0..rows.len() {
            if r != rank {
                let f = rows[r][c].rem_euclid(p);
                if f != 0 {
                    let pivot = rows[rank].clone();
                    for (x, y) in rows[r].iter_mut().zip(pivot) {
                        *x = (*x - f * y).rem_euclid(p);
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn lcm(a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// `dim Tor_i(S/I, K)_a` from the Taylor complex on `gens`, keyed by the
/// degree `a`; only degrees with some nonzero entry are kept, and each
/// vector is trimmed of trailing zeros.
pub fn taylor_tor(gens: &[Vec<u16>], nvars: usize, p: i64) -> BTreeMap<Vec<u16>, Vec<usize>> {
    let m = gens.len();
    assert!(m <= 16);
    let mut by_degree: BTreeMap<Vec<u16>, Vec<u32>> = BTreeMap::new();
    for subset in 0u32..1 << m {
        let mut l = vec![0u16; nvars];
        for (t, g) in gens.iter().enumerate() {
            if subset >> t & 1 == 1 {
                l = lcm(&l, g);
            }
        }
        by_degree.entry(l).or_default().push(subset);
    }
    let mut out = BTreeMap::new();
    for (a, subsets) in by_degree {
        let top = subsets
            .iter()
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap();
        let layer = |i: usize| -> Vec<u32> {
            subsets
                .iter()
                .copied()
                .filter(|s| s.count_ones() as usize == i)
                .collect()
        };
        // rank of the map from size-i subsets to size-(i-1) subsets
        let rank = |i: usize| -> usize {
            if i == 0 || i > top {
                return 0;
            }
            let src = layer(i);
            let dst = layer(i - 1);
            if src.is_empty() || dst.is_empty() {
                return 0;
            }
            let rows: Vec<Vec<i64>> = src
                .iter()
                .map(|&f| {
                    dst.iter()
                        .map(|&g| {
                            if g & !f != 0 || (f & !g).count_ones() != 1 {
                                return 0;
                            }
                            let t = (f & !g).trailing_zeros();
                            let before = (f & ((1 << t) - 1)).count_ones();
                            if before % 2 == 0 {
                                1
                            } else {
                                -1
                            }
                        })
                        .collect()
                })
                .collect();
            rank_mod_p(rows, p)
        };
        let mut dims: Vec<usize> = (0..=top)
            .map(|i| layer(i).len() - rank(i) - rank(i + 1))
            .collect();
        while dims.last() == Some(&0) {
            dims.pop();
        }
        if !dims.is_empty() {
            out.insert(a, dims);
        }
    }
    out
}

pub fn space(nvars: usize) -> Arc<VariableSpace> {
    Arc::new(VariableSpace::indexed("x", nvars))
}

pub fn ideal(nvars: usize, gens: &[Vec<u16>]) -> MonomialIdeal {
    MonomialIdeal::minimalize(
        space(nvars),
        gens.iter().map(|g| Monomial::from_exponents(g)),
    )
    .unwrap()
}

pub fn exponents(i: &MonomialIdeal) -> Vec<Vec<u16>> {
    i.generators()
        .iter()
        .map(|g| g.exponents().to_vec())
        .collect()
}

/// A random monomial ideal with `1..=maxgens` generators, each of total
/// degree `1..=maxdeg`.
pub fn random_ideal(
    rng: &mut impl Rng,
    nvars: usize,
    maxdeg: u16,
    maxgens: usize,
) -> MonomialIdeal {
    let count = rng.gen_range(1..=maxgens);
    let gens: Vec<Vec<u16>> = (0..count)
        .map(|_| {
            let deg = rng.gen_range(1..=maxdeg);
            let mut e = vec![0u16; nvars];
            for _ in 0..deg {
                e[rng.gen_range(0..nvars)] += 1;
            }
            e
        })
        .collect();
    ideal(nvars, &gens)
}

/// Trims trailing zeros from each dimension vector and drops empty ones.
pub fn normalize(dims: Vec<(Monomial, Vec<usize>)>) -> BTreeMap<Vec<u16>, Vec<usize>> {
    dims.into_iter()
        .filter_map(|(a, mut d)| {
            while d.last() == Some(&0) {
                d.pop();
            }
            (!d.is_empty()).then(|| (a.exponents().to_vec(), d))
        })
        .collect()
}

/// Depth of `S/I` as `N - pd`, with `pd` read off the Taylor oracle.
pub fn oracle_depth(i: &MonomialIdeal, p: i64) -> usize {
    let tor = taylor_tor(&exponents(i), i.nvars(), p);
    let pd = tor.values().map(|d| d.len() - 1).max().unwrap_or(0);
    i.nvars() - pd
}

//! Test-only oracles, independent of the library's generation path.
#![allow(dead_code)]

use horn_core::{Spectrum, TripleTable};

pub type RawTriple = (Vec<usize>, Vec<usize>, Vec<usize>);

pub fn reference_sigma() -> Spectrum {
    Spectrum::new([13.0, 8.0, 5.0, 3.0, 2.0, 1.0].map(|v| v / 32.0).to_vec()).unwrap()
}

/// All r-subsets of 1..=p, by recursion on the largest element.
fn all_subsets(p: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    if p < r {
        return vec![];
    }
    let mut out = all_subsets(p - 1, r);
    for mut s in all_subsets(p - 1, r - 1) {
        s.push(p);
        out.push(s);
    }
    out
}

/// Direct filtering of every triple of r-subsets by the sum identity and the
/// recursive condition, with no memoization and no bucketing.
pub fn brute_force_t(p: usize, r: usize) -> Vec<RawTriple> {
    let conditions: Vec<(usize, Vec<RawTriple>)> = if r >= 2 {
        (1..r).map(|s| (s, brute_force_t(r, s))).collect()
    } else {
        vec![]
    };
    let subs = all_subsets(p, r);
    let mut out = Vec::new();
    for i in &subs {
        for j in &subs {
            for k in &subs {
                let lhs: usize = i.iter().sum::<usize>() + j.iter().sum::<usize>();
                if lhs != k.iter().sum::<usize>() + r * (r + 1) / 2 {
                    continue;
                }
                let ok = conditions.iter().all(|(s, inner)| {
                    inner.iter().all(|(f, g, h)| {
                        let a: usize = f.iter().map(|&x| i[x - 1]).sum();
                        let b: usize = g.iter().map(|&x| j[x - 1]).sum();
                        let c: usize = h.iter().map(|&x| k[x - 1]).sum();
                        a + b <= c + s * (s + 1) / 2
                    })
                });
                if ok {
                    out.push((i.clone(), j.clone(), k.clone()));
                }
            }
        }
    }
    out.sort();
    out
}

pub fn table_rank_raw(table: &TripleTable, r: usize) -> Vec<RawTriple> {
    table
        .rank(r)
        .iter()
        .map(|t| {
            (
                t.i().elements().to_vec(),
                t.j().elements().to_vec(),
                t.k().elements().to_vec(),
            )
        })
        .collect()
}

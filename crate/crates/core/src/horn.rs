//! Horn triples: the candidate sets `U^p_r`, the recursively filtered sets
//! `T^p_r`, the inequality they index, and the domino doubling map.
//!
//! Index sets are 1-based throughout, as in the usual statement of Horn's
//! inequalities. All combinatorics is exact integer arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// Strictly increasing subset of `{1, …, p}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet {
    elements: Vec<usize>,
    p: usize,
}

impl IndexSet {
    pub fn new(p: usize, elements: Vec<usize>) -> Result<Self> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSet(format!(
                "{elements:?} is not strictly increasing"
            )));
        }
        if elements.iter().any(|&e| e == 0 || e > p) {
            return Err(Error::InvalidIndexSet(format!("{elements:?} leaves 1..={p}")));
        }
        Ok(IndexSet { elements, p })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.elements.iter().sum()
    }

    /// `Σ_{f∈F} x_f` where `x_1 < x_2 < …` enumerates `self`.
    fn sum_at(&self, positions: &IndexSet) -> usize {
        positions.elements.iter().map(|&f| self.elements[f - 1]).sum()
    }

    /// `Σ_{i∈I} values_i` (1-based).
    pub fn select_sum(&self, values: &[f64]) -> f64 {
        self.elements.iter().map(|&i| values[i - 1]).sum()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, e) in self.elements.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// `(I, J, K)` of equal cardinality `r` inside `{1, …, p}`. Ordered
/// lexicographically on `(I, J, K)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HornTriple {
    i: IndexSet,
    j: IndexSet,
    k: IndexSet,
}

impl HornTriple {
    pub fn new(i: IndexSet, j: IndexSet, k: IndexSet) -> Result<Self> {
        if i.p != j.p || i.p != k.p {
            return Err(Error::InvalidIndexSet("index sets have different ambient sizes".into()));
        }
        if i.len() != j.len() || i.len() != k.len() {
            return Err(Error::InvalidIndexSet("index sets have different cardinalities".into()));
        }
        Ok(HornTriple { i, j, k })
    }

    pub fn from_vecs(p: usize, i: Vec<usize>, j: Vec<usize>, k: Vec<usize>) -> Result<Self> {
        HornTriple::new(IndexSet::new(p, i)?, IndexSet::new(p, j)?, IndexSet::new(p, k)?)
    }

    pub fn i(&self) -> &IndexSet {
        &self.i
    }

    pub fn j(&self) -> &IndexSet {
        &self.j
    }

    pub fn k(&self) -> &IndexSet {
        &self.k
    }

    pub fn p(&self) -> usize {
        self.i.p
    }

    pub fn r(&self) -> usize {
        self.i.len()
    }

    /// `ΣI + ΣJ = ΣK + r(r+1)/2`.
    pub fn satisfies_sum_identity(&self) -> bool {
        let r = self.r();
        self.i.sum() + self.j.sum() == self.k.sum() + r * (r + 1) / 2
    }

    /// `(J, I, K)`.
    pub fn swapped(&self) -> HornTriple {
        HornTriple {
            i: self.j.clone(),
            j: self.i.clone(),
            k: self.k.clone(),
        }
    }

    /// Checks this triple against `(F, G, H)`:
    /// `Σ_{f∈F} i_f + Σ_{g∈G} j_g ≤ Σ_{h∈H} k_h + s(s+1)/2`.
    fn passes(&self, inner: &HornTriple) -> bool {
        let s = inner.r();
        self.i.sum_at(&inner.i) + self.j.sum_at(&inner.j) <= self.k.sum_at(&inner.k) + s * (s + 1) / 2
    }

    fn to_json(&self) -> [Vec<usize>; 3] {
        [
            self.i.elements.clone(),
            self.j.elements.clone(),
            self.k.elements.clone(),
        ]
    }
}

impl fmt::Display for HornTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.j, self.k)
    }
}

/// All `r`-subsets of `{1, …, p}` in lexicographic order.
pub fn subsets(p: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > p {
        return out;
    }
    let mut current: Vec<usize> = (1..=r).collect();
    loop {
        out.push(current.clone());
        // Rightmost position that can still advance.
        let Some(pos) = (0..r).rev().find(|&t| current[t] < p - (r - 1 - t)) else {
            break;
        };
        current[pos] += 1;
        for t in pos + 1..r {
            current[t] = current[t - 1] + 1;
        }
    }
    out
}

/// `U^p_r`: every triple of `r`-subsets satisfying the sum identity, sorted.
pub fn generate_u(p: usize, r: usize) -> Result<Vec<HornTriple>> {
    if r == 0 {
        return Err(Error::InvalidIndexSet("rank must be at least 1".into()));
    }
    if r > p {
        return Err(Error::RankTooLarge { r, p });
    }
    let subs: Vec<IndexSet> = subsets(p, r).into_iter().map(|e| IndexSet { elements: e, p }).collect();
    let max_sum = subs.iter().map(IndexSet::sum).max().unwrap_or(0);
    // Subsets bucketed by their sum, each bucket still in lexicographic order.
    let mut by_sum: Vec<Vec<&IndexSet>> = vec![Vec::new(); max_sum + 1];
    for s in &subs {
        by_sum[s.sum()].push(s);
    }
    let shift = r * (r + 1) / 2;
    let mut out = Vec::new();
    for i in &subs {
        for j in &subs {
            let Some(target) = (i.sum() + j.sum()).checked_sub(shift) else {
                continue;
            };
            for &k in by_sum.get(target).map(Vec::as_slice).unwrap_or(&[]) {
                out.push(HornTriple {
                    i: i.clone(),
                    j: j.clone(),
                    k: k.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// `T^p_r` for every `1 ≤ r ≤ p`, each rank sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleTable {
    p: usize,
    by_rank: Vec<Vec<HornTriple>>,
}

impl TripleTable {
    pub fn p(&self) -> usize {
        self.p
    }

    /// `T^p_r`; empty outside `1..=p`.
    pub fn rank(&self, r: usize) -> &[HornTriple] {
        match r {
            0 => &[],
            r => self.by_rank.get(r - 1).map(Vec::as_slice).unwrap_or(&[]),
        }
    }

    /// Triples of rank `r < p`, i.e. those indexing a Horn inequality.
    pub fn inequality_triples(&self) -> impl Iterator<Item = &HornTriple> {
        self.by_rank.iter().take(self.p.saturating_sub(1)).flatten()
    }

    pub fn contains(&self, t: &HornTriple) -> bool {
        t.p() == self.p && self.rank(t.r()).binary_search(t).is_ok()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_rank.iter().map(Vec::len).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableJson::from(self)).expect("table serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: TableJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidConfig(format!("malformed triple table: {e}")))?;
        TripleTable::try_from(raw)
    }
}

/// Memoized tables by ambient size. `T^p` is built from the complete tables
/// `T^r`, `r < p`, together with its own lower ranks.
#[derive(Debug, Clone, Default)]
pub struct TripleCache {
    tables: Vec<TripleTable>,
}

impl TripleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn table(&mut self, p: usize) -> &TripleTable {
        assert!(p >= 1, "ambient size must be positive");
        while self.tables.len() < p {
            let next = self.build(self.tables.len() + 1);
            self.tables.push(next);
        }
        &self.tables[p - 1]
    }

    fn build(&self, p: usize) -> TripleTable {
        let mut by_rank: Vec<Vec<HornTriple>> = Vec::with_capacity(p);
        for r in 1..=p {
            let candidates = generate_u(p, r).expect("1 <= r <= p");
            let conditions: &[Vec<HornTriple>] = if r < p {
                &self.tables[r - 1].by_rank[..r - 1]
            } else {
                &by_rank[..]
            };
            let kept = candidates
                .into_iter()
                .filter(|t| conditions.iter().flatten().all(|inner| t.passes(inner)))
                .collect();
            by_rank.push(kept);
        }
        TripleTable { p, by_rank }
    }
}

pub fn generate_t(p: usize) -> TripleTable {
    TripleCache::new().table(p).clone()
}

/// `Σ_{i∈I} α_i + Σ_{j∈J} β_j − Σ_{k∈K} γ_k`; nonnegative iff the inequality holds.
pub fn horn_inequality_slack(t: &HornTriple, alpha: &Spectrum, beta: &Spectrum, gamma: &Spectrum) -> Result<f64> {
    for s in [alpha, beta, gamma] {
        if s.len() != t.p() {
            return Err(Error::DimensionMismatch {
                expected: t.p(),
                found: s.len(),
            });
        }
    }
    Ok(t.i.select_sum(alpha.values()) + t.j.select_sum(beta.values()) - t.k.select_sum(gamma.values()))
}

/// `(I₂, J₂, K₂)` with `I₂ = J₂ = {2i−1 : i∈I} ∪ {2j : j∈J}` and
/// `K₂ = ∪_{k∈K} {2k−1, 2k}`, inside `{1, …, 2p}`.
///
/// Requires `t ∈ U^p_r`; the image is then in `U^{2p}_{2r}`, which is checked.
pub fn domino_double(t: &HornTriple) -> Result<HornTriple> {
    if !t.satisfies_sum_identity() {
        return Err(Error::InvalidIndexSet(format!("{t} is not in U^{}_{}", t.p(), t.r())));
    }
    let p2 = 2 * t.p();
    let mut ij: Vec<usize> =
        t.i.elements
            .iter()
            .map(|&i| 2 * i - 1)
            .chain(t.j.elements.iter().map(|&j| 2 * j))
            .collect();
    ij.sort_unstable();
    let k: Vec<usize> = t.k.elements.iter().flat_map(|&k| [2 * k - 1, 2 * k]).collect();
    let doubled = HornTriple::from_vecs(p2, ij.clone(), ij, k)?;
    if !doubled.satisfies_sum_identity() {
        return Err(Error::Consistency(format!(
            "doubled triple {doubled} breaks the sum identity"
        )));
    }
    Ok(doubled)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominoFailure {
    pub triple: String,
    pub doubled: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominoReport {
    pub p: usize,
    pub checked: usize,
    pub failures: Vec<DominoFailure>,
}

impl fmt::Display for DominoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} checked, {} failures", self.checked, self.failures.len())
    }
}

/// Checks `domino_double(t) ∈ T^{2p}_{2r}` for every `t ∈ T^p_r`, `r < p`.
pub fn verify_domino_theorem(p: usize, cache: &mut TripleCache) -> Result<DominoReport> {
    if p == 0 {
        return Ok(DominoReport {
            p,
            checked: 0,
            failures: Vec::new(),
        });
    }
    let small = cache.table(p).clone();
    let big = cache.table(2 * p);
    let mut report = DominoReport {
        p,
        checked: 0,
        failures: Vec::new(),
    };
    for t in small.inequality_triples() {
        let doubled = domino_double(t)?;
        report.checked += 1;
        if !big.contains(&doubled) {
            report.failures.push(DominoFailure {
                triple: t.to_string(),
                doubled: doubled.to_string(),
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Serialize, Deserialize)]
struct RankJson {
    p: usize,
    r: usize,
    triples: Vec<[Vec<usize>; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TableJson {
    p: usize,
    ranks: Vec<RankJson>,
}

impl From<&TripleTable> for TableJson {
    fn from(t: &TripleTable) -> Self {
        TableJson {
            p: t.p,
            ranks: t
                .by_rank
                .iter()
                .enumerate()
                .map(|(n, rank)| RankJson {
                    p: t.p,
                    r: n + 1,
                    triples: rank.iter().map(HornTriple::to_json).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<TableJson> for TripleTable {
    type Error = Error;

    fn try_from(raw: TableJson) -> Result<Self> {
        let p = raw.p;
        if raw.ranks.len() != p {
            return Err(Error::InvalidConfig(format!(
                "expected {p} ranks, found {}",
                raw.ranks.len()
            )));
        }
        let mut by_rank = Vec::with_capacity(p);
        for (n, rank) in raw.ranks.into_iter().enumerate() {
            if rank.p != p || rank.r != n + 1 {
                return Err(Error::InvalidConfig(format!(
                    "rank entry {n} has p={}, r={}",
                    rank.p, rank.r
                )));
            }
            let mut triples = Vec::with_capacity(rank.triples.len());
            for [i, j, k] in rank.triples {
                let t = HornTriple::from_vecs(p, i, j, k)?;
                if t.r() != rank.r || !t.satisfies_sum_identity() {
                    return Err(Error::InvalidIndexSet(format!(
                        "{t} does not belong to U^{p}_{}",
                        rank.r
                    )));
                }
                triples.push(t);
            }
            if triples.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidConfig(format!(
                    "rank {} is not in canonical order",
                    n + 1
                )));
            }
            by_rank.push(triples);
        }
        Ok(TripleTable { p, by_rank })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(p: usize, i: &[usize], j: &[usize], k: &[usize]) -> HornTriple {
        HornTriple::from_vecs(p, i.to_vec(), j.to_vec(), k.to_vec()).unwrap()
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            subsets(4, 2),
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
        assert_eq!(subsets(3, 3), vec![vec![1, 2, 3]]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::new(3, vec![2, 1]).is_err());
        assert!(IndexSet::new(3, vec![1, 4]).is_err());
        assert!(IndexSet::new(3, vec![0]).is_err());
        assert!(HornTriple::from_vecs(3, vec![1], vec![1, 2], vec![1]).is_err());
    }

    #[test]
    fn u_small_cases() {
        let u21 = generate_u(2, 1).unwrap();
        assert_eq!(
            u21,
            vec![
                triple(2, &[1], &[1], &[1]),
                triple(2, &[1], &[2], &[2]),
                triple(2, &[2], &[1], &[2])
            ]
        );

        let u31 = generate_u(3, 1).unwrap();
        let mut want = vec![
            triple(3, &[1], &[1], &[1]),
            triple(3, &[1], &[2], &[2]),
            triple(3, &[2], &[1], &[2]),
            triple(3, &[1], &[3], &[3]),
            triple(3, &[3], &[1], &[3]),
            triple(3, &[2], &[2], &[3]),
        ];
        want.sort();
        assert_eq!(u31, want);

        assert_eq!(
            generate_u(3, 3).unwrap(),
            vec![triple(3, &[1, 2, 3], &[1, 2, 3], &[1, 2, 3])]
        );
        assert_eq!(generate_u(2, 3), Err(Error::RankTooLarge { r: 3, p: 2 }));
        assert!(generate_u(2, 0).is_err());
    }

    #[test]
    fn t_small_cases() {
        assert_eq!(generate_t(1).counts(), vec![1]);
        let t2 = generate_t(2);
        assert_eq!(t2.counts(), vec![3, 1]);
        assert_eq!(t2.rank(2), &[triple(2, &[1, 2], &[1, 2], &[1, 2])]);
        let t3 = generate_t(3);
        assert_eq!(t3.counts(), vec![6, 6, 1]);
        assert_eq!(t3.rank(2), generate_u(3, 2).unwrap().as_slice());
        assert_eq!(t3.inequality_triples().count(), 12);
    }

    #[test]
    fn slack_examples() {
        let s = |v: &[f64]| Spectrum::new(v.to_vec()).unwrap();
        let t = triple(2, &[1], &[1], &[1]);
        assert_eq!(
            horn_inequality_slack(&t, &s(&[1.0, 0.0]), &s(&[1.0, 0.0]), &s(&[1.0, 0.0])).unwrap(),
            1.0
        );
        let t = triple(2, &[2], &[2], &[2]);
        assert_eq!(
            horn_inequality_slack(&t, &s(&[2.0, 0.0]), &s(&[2.0, 0.0]), &s(&[2.0, 2.0])).unwrap(),
            -2.0
        );

        let t = triple(3, &[1], &[1], &[1]);
        let alpha = s(&[13.0 / 32.0, 5.0 / 32.0, 2.0 / 32.0]);
        let beta = s(&[8.0 / 32.0, 3.0 / 32.0, 1.0 / 32.0]);
        let gamma = s(&[0.5, 0.3125, 0.1875]);
        assert_eq!(horn_inequality_slack(&t, &alpha, &beta, &gamma).unwrap(), 0.15625);
        assert!(horn_inequality_slack(&t, &alpha, &beta, &s(&[1.0])).is_err());
    }

    #[test]
    fn domino_examples() {
        let d = domino_double(&triple(1, &[1], &[1], &[1])).unwrap();
        assert_eq!(d, triple(2, &[1, 2], &[1, 2], &[1, 2]));

        let d = domino_double(&triple(2, &[1], &[2], &[2])).unwrap();
        assert_eq!(d, triple(4, &[1, 4], &[1, 4], &[3, 4]));
        assert_eq!(d.i().sum() + d.j().sum(), d.k().sum() + 3);

        let d = domino_double(&triple(2, &[1, 2], &[1, 2], &[1, 2])).unwrap();
        assert_eq!(d, triple(4, &[1, 2, 3, 4], &[1, 2, 3, 4], &[1, 2, 3, 4]));

        assert!(domino_double(&triple(2, &[1], &[1], &[2])).is_err());
    }

    #[test]
    fn domino_small_runs() {
        let mut cache = TripleCache::new();
        assert_eq!(verify_domino_theorem(1, &mut cache).unwrap().checked, 0);
        let r2 = verify_domino_theorem(2, &mut cache).unwrap();
        assert_eq!((r2.checked, r2.failures.len()), (3, 0));
        assert_eq!(r2.to_string(), "3 checked, 0 failures");
    }

    #[test]
    fn json_round_trip() {
        let t = generate_t(3);
        let json = t.to_json();
        assert_eq!(json["ranks"][0]["triples"][0], serde_json::json!([[1], [1], [1]]));
        assert_eq!(TripleTable::from_json(&json).unwrap(), t);
    }

    #[test]
    fn json_rejects_tampering() {
        let mut json = generate_t(2).to_json();
        json["ranks"][0]["triples"][0] = serde_json::json!([[1], [1], [2]]);
        assert!(TripleTable::from_json(&json).is_err());
    }
}

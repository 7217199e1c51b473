//! Graded bundle bookkeeping: basis labels per degree, sections with
//! polynomial coefficients, wedge words, Koszul signs and unshuffles.

use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{Poly, Vars};

/// A non-positively graded bundle of finite depth: degree 0 down to
/// degree `-(depth-1)`, with positive rank and unique labels per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBundle {
    ranks: Vec<usize>,
    labels: Vec<Vec<String>>,
}

impl GradedBundle {
    pub fn new(ranks: Vec<usize>, labels: Vec<Vec<String>>) -> Self {
        assert!(!ranks.is_empty(), "depth must be at least 1");
        assert!(ranks.iter().all(|&r| r > 0), "ranks must be positive");
        assert_eq!(ranks.len(), labels.len());
        for (r, ls) in ranks.iter().zip(&labels) {
            assert_eq!(*r, ls.len(), "label count must match rank");
            let mut seen = std::collections::BTreeSet::new();
            for l in ls {
                assert!(seen.insert(l.clone()), "duplicate basis label {l}");
            }
        }
        GradedBundle { ranks, labels }
    }

    /// Number of levels: a Lie n-algebroid has depth n.
    pub fn depth(&self) -> usize {
        self.ranks.len()
    }

    /// Rank of `E_{-level}`.
    pub fn rank(&self, level: usize) -> usize {
        self.ranks[level]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn label(&self, level: usize, idx: usize) -> &str {
        &self.labels[level][idx]
    }

    pub fn labels(&self, level: usize) -> &[String] {
        &self.labels[level]
    }

    pub fn find_label(&self, name: &str) -> Option<(usize, usize)> {
        for (lv, ls) in self.labels.iter().enumerate() {
            if let Some(i) = ls.iter().position(|l| l == name) {
                return Some((lv, i));
            }
        }
        None
    }
}

/// A section of `E_{-level}` (or, with `level = 0`, of `E_0`) written
/// in the constant basis with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub level: usize,
    coeffs: BTreeMap<usize, Poly>,
}

impl Section {
    pub fn zero(level: usize) -> Self {
        Section {
            level,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(level: usize, idx: usize, vars: &Vars) -> Self {
        let mut s = Section::zero(level);
        s.add(idx, Poly::int(vars, 1));
        s
    }

    pub fn add(&mut self, idx: usize, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_section(&mut self, other: &Section) {
        assert_eq!(self.level, other.level, "section levels differ");
        for (&i, c) in &other.coeffs {
            self.add(i, c.clone());
        }
    }

    pub fn scale(&self, f: &Poly) -> Section {
        let mut out = Section::zero(self.level);
        for (&i, c) in &self.coeffs {
            out.add(i, f * c);
        }
        out
    }

    pub fn neg(&self) -> Section {
        let mut out = Section::zero(self.level);
        for (&i, c) in &self.coeffs {
            out.add(i, -c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: usize, vars: &Vars) -> Poly {
        self.coeffs
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| Poly::zero(vars))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    /// Degree carried by the grading: `E_{-level}` sits in degree
    /// `-level`.
    pub fn degree(&self) -> i64 {
        -(self.level as i64)
    }

    pub fn display<'a>(&'a self, bundle: &'a GradedBundle) -> SectionDisplay<'a> {
        SectionDisplay {
            section: self,
            bundle,
        }
    }
}

pub struct SectionDisplay<'a> {
    section: &'a Section,
    bundle: &'a GradedBundle,
}

impl fmt::Display for SectionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.section.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .section
            .coeffs
            .iter()
            .map(|(&i, c)| {
                let label = self.bundle.label(self.section.level, i);
                match c.as_constant() {
                    Some(k) if k == crate::poly::qi(1) => label.to_string(),
                    Some(k) if k == crate::poly::qi(-1) => format!("-{label}"),
                    _ => format!("({c})*{label}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A `(j, k-j)` split of `{1..k}` with both blocks ascending, stored
/// as the full permutation image `[block1, block2]` in 1-based values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unshuffle {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl Unshuffle {
    /// The permutation as a 0-based image list: position p holds
    /// sigma(p+1)-1.
    pub fn image(&self) -> Vec<usize> {
        self.first
            .iter()
            .chain(self.second.iter())
            .map(|&v| v - 1)
            .collect()
    }
}

/// All `(j, k-j)`-unshuffles in lexicographic order of the first block.
pub fn unshuffles(j: usize, k: usize) -> Vec<Unshuffle> {
    assert!(j <= k);
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (1..=j).collect();
    loop {
        let second: Vec<usize> = (1..=k).filter(|v| !pick.contains(v)).collect();
        out.push(Unshuffle {
            first: pick.clone(),
            second,
        });
        // next lexicographic j-subset of {1..k}
        let mut i = j;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] < k - (j - 1 - i) {
                pick[i] += 1;
                for t in i + 1..j {
                    pick[t] = pick[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Sign induced by permuting homogeneous elements in the exterior
/// algebra: an adjacent transposition of elements with degrees `p`, `q`
/// contributes `-(-1)^(p*q)`.
///
/// `image` lists the permuted positions (0-based): entry `t` says that
/// slot `t` of the permuted word holds original element `image[t]`.
pub fn koszul_sign(image: &[usize], degrees: &[i64]) -> i64 {
    assert_eq!(image.len(), degrees.len(), "length mismatch");
    let mut w: Vec<usize> = image.to_vec();
    let mut sign = 1i64;
    // bubble back to the identity, tracking adjacent swaps
    for i in 0..w.len() {
        for j in (i + 1..w.len()).rev() {
            if w[j - 1] > w[j] {
                let (p, q) = (degrees[w[j - 1]], degrees[w[j]]);
                let parity = (p * q).rem_euclid(2);
                sign *= -(if parity == 0 { 1 } else { -1 });
                w.swap(j - 1, j);
            }
        }
    }
    sign
}

/// A wedge word: per-level sorted index tuples representing
/// `e_{j1} ^ ... ^ e_{jk}` within each level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeWord {
    /// `factors[level]` holds the ascending indices taken from that level.
    pub factors: Vec<Vec<usize>>,
}

/// Wedges basis indices drawn from the given levels into a canonical
/// word, returning the accumulated sign; `None` when a repeated index
/// of odd-parity behavior (self-wedge of an exterior generator) kills
/// the word.
///
/// Indices are supplied as `(level, index)` pairs in wedge order. All
/// factors are treated as ungraded exterior generators, matching the
/// convention that the Berezinian factors forget the grading.
pub fn wedge(parts: &[(usize, usize)], depth: usize) -> Option<(WedgeWord, i64)> {
    let mut factors: Vec<Vec<(usize, usize)>> = vec![Vec::new(); depth];
    // Stable bubble sort over the flat list groups levels together with
    // level-major order while tracking transposition signs.
    let mut flat: Vec<(usize, usize)> = parts.to_vec();
    let mut sign = 1i64;
    for i in 1..flat.len() {
        let mut j = i;
        while j > 0 && flat[j - 1] > flat[j] {
            flat.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if flat.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    for (lv, idx) in flat {
        factors[lv].push((lv, idx));
    }
    Some((
        WedgeWord {
            factors: factors
                .into_iter()
                .map(|v| v.into_iter().map(|(_, i)| i).collect())
                .collect(),
        },
        sign,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unshuffle_counts_are_binomial() {
        fn binom(n: usize, k: usize) -> usize {
            if k > n {
                return 0;
            }
            let mut r = 1usize;
            for i in 0..k {
                r = r * (n - i) / (i + 1);
            }
            r
        }
        for k in 0..=8 {
            for j in 0..=k {
                assert_eq!(unshuffles(j, k).len(), binom(k, j), "j={j} k={k}");
            }
        }
    }

    #[test]
    fn unshuffle_1_2_explicit() {
        let u = unshuffles(1, 3);
        let splits: Vec<(Vec<usize>, Vec<usize>)> =
            u.into_iter().map(|s| (s.first, s.second)).collect();
        assert_eq!(
            splits,
            vec![
                (vec![1], vec![2, 3]),
                (vec![2], vec![1, 3]),
                (vec![3], vec![1, 2]),
            ]
        );
    }

    #[test]
    fn unshuffle_0_k_single() {
        assert_eq!(unshuffles(0, 4).len(), 1);
        assert_eq!(unshuffles(0, 4)[0].second, vec![1, 2, 3, 4]);
    }

    #[test]
    fn koszul_sign_degree_zero_is_signature() {
        // swapping two degree-0 elements gives -1
        assert_eq!(koszul_sign(&[1, 0], &[0, 0]), -1);
        assert_eq!(koszul_sign(&[2, 0, 1], &[0, 0, 0]), 1);
    }

    #[test]
    fn koszul_sign_mixed_parity() {
        // swapping degree 0 with degree -1: parity product even, so -1
        assert_eq!(koszul_sign(&[1, 0], &[0, -1]), -1);
        // swapping two degree -1 elements: parity product odd, so +1
        assert_eq!(koszul_sign(&[1, 0], &[-1, -1]), 1);
    }

    /// Brute-force oracle: applies the inverse permutation one adjacent
    /// transposition at a time.
    fn sign_oracle(image: &[usize], degrees: &[i64]) -> i64 {
        let mut w: Vec<usize> = image.to_vec();
        let mut sign = 1i64;
        loop {
            let Some(j) = (1..w.len()).find(|&j| w[j - 1] > w[j]) else {
                return sign;
            };
            let (p, q) = (degrees[w[j - 1]], degrees[w[j]]);
            sign *= if (p * q).rem_euclid(2) == 0 { -1 } else { 1 };
            w.swap(j - 1, j);
        }
    }

    #[test]
    fn koszul_sign_matches_bruteforce_up_to_length_4() {
        let degree_choices: &[i64] = &[0, -1, -2, -3];
        for len in 1..=4usize {
            let mut perm: Vec<usize> = (0..len).collect();
            let perms = permutations(&mut perm);
            for p in &perms {
                for mask in 0..(degree_choices.len() as u32).pow(len as u32) {
                    let mut degs = Vec::with_capacity(len);
                    let mut m = mask;
                    for _ in 0..len {
                        degs.push(degree_choices[(m % 4) as usize]);
                        m /= 4;
                    }
                    assert_eq!(koszul_sign(p, &degs), sign_oracle(p, &degs));
                }
            }
        }
    }

    fn permutations(items: &mut Vec<usize>) -> Vec<Vec<usize>> {
        fn rec(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == 1 {
                out.push(items.clone());
                return;
            }
            for i in 0..k {
                rec(k - 1, items, out);
                if k % 2 == 0 {
                    items.swap(i, k - 1);
                } else {
                    items.swap(0, k - 1);
                }
            }
        }
        let mut out = Vec::new();
        let n = items.len();
        rec(n, items, &mut out);
        out
    }

    #[test]
    fn koszul_sign_is_multiplicative() {
        // composing permutations multiplies signs (same degree list)
        let a = [2usize, 0, 3, 1];
        let b = [1usize, 3, 0, 2];
        // c = a after b: c[t] = b[a[t]]
        let c: Vec<usize> = a.iter().map(|&t| b[t]).collect();
        // multiplicativity holds when the degree list is permuted
        // consistently; check on degree-equal slots
        let uniform = &[-1i64, -1, -1, -1];
        assert_eq!(
            koszul_sign(&c, uniform),
            koszul_sign(&a, uniform) * koszul_sign(&b, uniform)
        );
        let zero = &[0i64, 0, 0, 0];
        assert_eq!(
            koszul_sign(&c, zero),
            koszul_sign(&a, zero) * koszul_sign(&b, zero)
        );
    }

    #[test]
    fn wedge_canonicalization() {
        // e1 ^ e2 canonical; e2 ^ e1 picks up a minus sign
        let (w1, s1) = wedge(&[(0, 0), (0, 1)], 1).unwrap();
        let (w2, s2) = wedge(&[(0, 1), (0, 0)], 1).unwrap();
        assert_eq!(w1, w2);
        assert_eq!(s1, 1);
        assert_eq!(s2, -1);
        // repeated generator vanishes
        assert!(wedge(&[(0, 0), (0, 0)], 1).is_none());
        // canonicalizing twice equals once
        let flat: Vec<(usize, usize)> = w2
            .factors
            .iter()
            .enumerate()
            .flat_map(|(lv, idxs)| idxs.iter().map(move |&i| (lv, i)))
            .collect();
        let (w3, s3) = wedge(&flat, 1).unwrap();
        assert_eq!(w3, w2);
        assert_eq!(s3, 1);
    }

    #[test]
    fn top_wedge_is_sorted_with_positive_sign() {
        let parts: Vec<(usize, usize)> = (0..5).map(|i| (0, i)).collect();
        let (w, s) = wedge(&parts, 1).unwrap();
        assert_eq!(s, 1);
        assert_eq!(w.factors[0], vec![0, 1, 2, 3, 4]);
    }
}

//! Tag vectors and their correlation arithmetic.
//!
//! A tag of length `v` and weight `k` is a binary vector marking `k` qutrit
//! slots inside a frame. What makes a tag usable for synchronization is the
//! gap between its weight and its worst off-peak periodic autocorrelation:
//! the comma-free index `rho = 2 * (k - max_t R(t))`. Positive `rho` means
//! every cyclic shift is distinguishable and the nearest-shift decoder
//! corrects up to `floor((rho - 1) / 2)` symmetric errors per window.

use crate::error::{Error, Result};

/// Binary vector of frame length `v`, indexed `0..v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TagVector {
    bits: Vec<bool>,
}

impl TagVector {
    pub fn from_bits(bits: Vec<bool>) -> Result<TagVector> {
        if bits.is_empty() {
            return Err(Error::InvalidParameter("tag vector must be nonempty".into()));
        }
        Ok(TagVector { bits })
    }

    /// Indicator vector of `support` inside `Z_v`.
    pub fn from_support(v: usize, support: &[usize]) -> Result<TagVector> {
        let support = check_support(v, support)?;
        let mut bits = vec![false; v];
        for &s in &support {
            bits[s] = true;
        }
        Ok(TagVector { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Positions of the ones, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.bits[i]).collect()
    }

    /// Cyclic shift: bit `i` of the result is bit `i - t mod v` of `self`.
    /// Positive `t` moves the pattern right; negative `t` moves it left.
    pub fn cyclic_shift(&self, t: i64) -> TagVector {
        let v = self.len() as i64;
        let t = t.rem_euclid(v) as usize;
        let v = self.len();
        let mut bits = vec![false; v];
        for (i, slot) in bits.iter_mut().enumerate() {
            *slot = self.bits[(i + v - t) % v];
        }
        TagVector { bits }
    }

    pub fn hamming(&self, other: &TagVector) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count())
    }
}

/// Validates a support: elements of `Z_v`, no duplicates, at least one.
/// Returns the sorted copy used everywhere else.
pub fn check_support(v: usize, support: &[usize]) -> Result<Vec<usize>> {
    if v == 0 {
        return Err(Error::InvalidParameter("frame length must be positive".into()));
    }
    if support.is_empty() {
        return Err(Error::InvalidParameter("support must be nonempty".into()));
    }
    let mut s = support.to_vec();
    s.sort_unstable();
    for w in s.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateSupportElement(w[0]));
        }
    }
    if let Some(&max) = s.last() {
        if max >= v {
            return Err(Error::SupportOutOfRange { elem: max, v });
        }
    }
    Ok(s)
}

/// `support + t` elementwise modulo `v`, sorted.
pub fn translate(support: &[usize], t: i64, v: usize) -> Result<Vec<usize>> {
    let support = check_support(v, support)?;
    let shift = t.rem_euclid(v as i64) as usize;
    let mut out: Vec<usize> = support.iter().map(|&s| (s + shift) % v).collect();
    out.sort_unstable();
    Ok(out)
}

/// Periodic cross-correlation `sum_i x_i * y_{i+t mod v}`.
pub fn periodic_correlation(x: &TagVector, y: &TagVector, t: usize) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let v = x.len();
    Ok((0..v).filter(|&i| x.bit(i) && y.bit((i + t) % v)).count())
}

/// Aperiodic cross-correlation `sum_i x_i * y_{i+t}` where out-of-range
/// indices contribute zero. `t` may be negative; |t| >= v gives 0.
pub fn aperiodic_correlation(x: &TagVector, y: &TagVector, t: i64) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let v = x.len() as i64;
    let mut acc = 0usize;
    for i in 0..v {
        let j = i + t;
        if j < 0 || j >= v {
            continue;
        }
        if x.bit(i as usize) && y.bit(j as usize) {
            acc += 1;
        }
    }
    Ok(acc)
}

/// Full periodic autocorrelation table of a support: entry `t` counts the
/// ordered pairs of support elements at cyclic distance `t`, so entry 0 is
/// the weight and the entries sum to `k^2`.
pub fn autocorrelation_profile(support: &[usize], v: usize) -> Result<Vec<usize>> {
    let support = check_support(v, support)?;
    let mut profile = vec![0usize; v];
    for &a in &support {
        for &b in &support {
            profile[(b + v - a) % v] += 1;
        }
    }
    Ok(profile)
}

/// Comma-free index `rho = 2 * (k - max_{t != 0} R(t))`.
///
/// Zero or negative values flag a tag whose orbit under cyclic shifts is
/// degenerate; such tags cannot self-synchronize.
pub fn comma_free_index(support: &[usize], v: usize) -> Result<i64> {
    if v < 2 {
        return Err(Error::InvalidParameter(
            "comma-free index needs frame length at least 2".into(),
        ));
    }
    let profile = autocorrelation_profile(support, v)?;
    let k = profile[0] as i64;
    let worst = profile[1..].iter().copied().max().unwrap_or(0) as i64;
    Ok(2 * (k - worst))
}

/// Upper bound `floor(2k(v-k) / (v-1))` on the comma-free index of any tag
/// of length `v` and weight `k`.
pub fn comma_free_upper_bound(v: usize, k: usize) -> Result<i64> {
    if v < 2 {
        return Err(Error::InvalidParameter(
            "bound needs frame length at least 2".into(),
        ));
    }
    if k == 0 || k > v {
        return Err(Error::InvalidParameter(format!(
            "weight {k} is outside 1..={v}"
        )));
    }
    let v = v as i64;
    let k = k as i64;
    Ok(2 * k * (v - k) / (v - 1))
}

/// A tag together with its synchronization certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumTag {
    v: usize,
    support: Vec<usize>,
    rho: i64,
    optimal: bool,
}

impl QuantumTag {
    /// Computes the comma-free index and optimality flag for `support`.
    pub fn new(v: usize, support: &[usize]) -> Result<QuantumTag> {
        let support = check_support(v, support)?;
        let rho = comma_free_index(&support, v)?;
        let bound = comma_free_upper_bound(v, support.len())?;
        Ok(QuantumTag {
            v,
            support,
            rho,
            optimal: rho >= 1 && rho == bound,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn rho(&self) -> i64 {
        self.rho
    }

    /// Whether `rho` attains `comma_free_upper_bound(v, k)`.
    pub fn is_optimal(&self) -> bool {
        self.optimal
    }

    /// Errors decoders should correct at most: `floor((rho - 1) / 2)`.
    pub fn decision_threshold(&self) -> Result<usize> {
        if self.rho < 1 {
            return Err(Error::NotSelfSynchronizing(self.rho));
        }
        Ok(((self.rho - 1) / 2) as usize)
    }

    pub fn vector(&self) -> TagVector {
        TagVector::from_support(self.v, &self.support).expect("support was validated")
    }
}

/// The window content seen when a frame tagged `a` is followed by one tagged
/// `b` and the reader is `i` symbols early: the last `i` bits of `a` then the
/// first `v - i` bits of `b`.
pub fn splice(a: &TagVector, b: &TagVector, i: usize) -> Result<TagVector> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let v = a.len();
    if i == 0 || i >= v {
        return Err(Error::InvalidParameter(format!(
            "splice overlap must lie in 1..{v}, got {i}"
        )));
    }
    let mut bits = Vec::with_capacity(v);
    bits.extend((v - i..v).map(|j| a.bit(j)));
    bits.extend((0..v - i).map(|j| b.bit(j)));
    Ok(TagVector { bits })
}

/// Splice-based metrics of a tag code: the code comma-free index `rho_c`
/// (least Hamming distance from any codeword to any boundary splice,
/// self-splices included) and the least pairwise distance `d`.
///
/// A single codeword gets the sentinel `d = v + 1`; its splices are its own
/// cyclic shifts, so `rho_c` reduces to the single-tag comma-free index.
pub fn code_metrics(codewords: &[TagVector]) -> Result<(usize, usize)> {
    let s = codewords.len();
    if s == 0 {
        return Err(Error::InvalidParameter("code must be nonempty".into()));
    }
    let v = codewords[0].len();
    let k = codewords[0].weight();
    for (i, c) in codewords.iter().enumerate() {
        if c.len() != v {
            return Err(Error::LengthMismatch(v, c.len()));
        }
        if c.weight() != k {
            return Err(Error::MixedWeights(k, c.weight()));
        }
        for (j, other) in codewords.iter().enumerate().skip(i + 1) {
            if c == other {
                return Err(Error::DuplicateCodeword(i, j));
            }
        }
    }

    let d = if s == 1 {
        v + 1
    } else {
        let mut best = usize::MAX;
        for i in 0..s {
            for j in i + 1..s {
                best = best.min(codewords[i].hamming(&codewords[j])?);
            }
        }
        best
    };

    let mut rho_c = usize::MAX;
    for a in codewords {
        for b in codewords {
            for i in 1..v {
                let sp = splice(a, b, i)?;
                for c in codewords {
                    rho_c = rho_c.min(c.hamming(&sp)?);
                }
            }
        }
    }
    Ok((rho_c, d))
}

/// A set of same-shape tags meant to be distinguishable both from each other
/// and from every boundary splice, so each frame can carry a digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalTagSet {
    v: usize,
    k: usize,
    tags: Vec<QuantumTag>,
    rho_c: usize,
    d: usize,
}

impl OrthogonalTagSet {
    pub fn new(v: usize, supports: &[Vec<usize>]) -> Result<OrthogonalTagSet> {
        if supports.is_empty() {
            return Err(Error::InvalidParameter("tag set must be nonempty".into()));
        }
        let tags: Vec<QuantumTag> = supports
            .iter()
            .map(|s| QuantumTag::new(v, s))
            .collect::<Result<_>>()?;
        let k = tags[0].k();
        let vectors: Vec<TagVector> = tags.iter().map(|t| t.vector()).collect();
        let (rho_c, d) = code_metrics(&vectors)?;
        if rho_c == 0 {
            return Err(Error::NotSelfSynchronizing(0));
        }
        Ok(OrthogonalTagSet { v, k, tags, rho_c, d })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn tags(&self) -> &[QuantumTag] {
        &self.tags
    }

    /// Code comma-free index: least distance from a codeword to a splice.
    pub fn rho_c(&self) -> usize {
        self.rho_c
    }

    /// Least pairwise codeword distance (`v + 1` when there is one codeword).
    pub fn d(&self) -> usize {
        self.d
    }

    /// Decision radius `floor((min(rho_c, d) - 1) / 2)`.
    pub fn decision_threshold(&self) -> usize {
        (self.rho_c.min(self.d) - 1) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(v: usize, support: &[usize]) -> TagVector {
        TagVector::from_support(v, support).unwrap()
    }

    #[test]
    fn cyclic_shift_moves_bits_right() {
        let x = TagVector::from_bits(vec![true, true, false, false]).unwrap();
        assert_eq!(x.cyclic_shift(1).bits(), &[false, true, true, false]);
        assert_eq!(x.cyclic_shift(4), x);
        assert_eq!(x.cyclic_shift(-1), x.cyclic_shift(3));
    }

    #[test]
    fn shift_translates_the_support() {
        let x = tv(27, &[0, 3, 11, 21, 26]);
        assert_eq!(x.cyclic_shift(1).support(), vec![0, 1, 4, 12, 22]);
        assert_eq!(
            translate(&[0, 3, 11, 21, 26], 1, 27).unwrap(),
            vec![0, 1, 4, 12, 22]
        );
    }

    #[test]
    fn support_validation() {
        assert!(TagVector::from_support(7, &[]).is_err());
        assert!(matches!(
            TagVector::from_support(7, &[0, 7]),
            Err(Error::SupportOutOfRange { elem: 7, v: 7 })
        ));
        assert!(matches!(
            TagVector::from_support(7, &[3, 3]),
            Err(Error::DuplicateSupportElement(3))
        ));
    }

    #[test]
    fn periodic_correlation_counts_coincidences() {
        let x = tv(7, &[0, 4, 6]);
        assert_eq!(periodic_correlation(&x, &x, 2).unwrap(), 1);
        assert_eq!(periodic_correlation(&x, &x, 0).unwrap(), 3);
    }

    #[test]
    fn autocorrelation_symmetry_and_mass() {
        // R(t) = R(v - t), and off-peak entries sum to k(k-1)
        for (v, support) in [
            (7usize, vec![0usize, 4, 6]),
            (13, vec![0, 1, 3, 9]),
            (27, vec![0, 3, 11, 21, 26]),
            (11, vec![0, 2, 3, 4, 8]),
        ] {
            let profile = autocorrelation_profile(&support, v).unwrap();
            let k = support.len();
            assert_eq!(profile[0], k);
            for t in 1..v {
                assert_eq!(profile[t], profile[v - t], "t = {t}");
            }
            assert_eq!(profile[1..].iter().sum::<usize>(), k * (k - 1));
        }
    }

    #[test]
    fn aperiodic_never_exceeds_periodic() {
        let x = tv(7, &[0, 4, 6]);
        assert_eq!(aperiodic_correlation(&x, &x, 2).unwrap(), 1);
        assert_eq!(aperiodic_correlation(&x, &x, 7).unwrap(), 0);
        assert_eq!(aperiodic_correlation(&x, &x, -9).unwrap(), 0);
        for t in 0..7i64 {
            let ap = aperiodic_correlation(&x, &x, t).unwrap();
            let p = periodic_correlation(&x, &x, t as usize).unwrap();
            assert!(ap <= p, "aperiodic {ap} > periodic {p} at t = {t}");
        }
    }

    #[test]
    fn comma_free_index_examples() {
        assert_eq!(comma_free_index(&[0, 3, 11, 21, 26], 27).unwrap(), 8);
        assert_eq!(comma_free_index(&[0, 4, 6], 7).unwrap(), 4);
        // {0, 2} in Z_4 is fixed by the shift t = 2
        assert_eq!(comma_free_index(&[0, 2], 4).unwrap(), 0);
        assert_eq!(comma_free_index(&[0, 1], 4).unwrap(), 2);
        // all-ones never synchronizes
        assert_eq!(comma_free_index(&[0, 1, 2], 3).unwrap(), 0);
    }

    #[test]
    fn comma_free_index_is_shift_and_reflection_invariant() {
        let v = 19;
        let support = [0usize, 2, 5, 11, 12];
        let rho = comma_free_index(&support, v).unwrap();
        for t in 0..v as i64 {
            let shifted = translate(&support, t, v).unwrap();
            assert_eq!(comma_free_index(&shifted, v).unwrap(), rho);
        }
        let reflected: Vec<usize> = support.iter().map(|&s| (v - s) % v).collect();
        assert_eq!(comma_free_index(&reflected, v).unwrap(), rho);
    }

    #[test]
    fn upper_bound_values() {
        assert_eq!(comma_free_upper_bound(27, 5).unwrap(), 8);
        assert_eq!(comma_free_upper_bound(7, 3).unwrap(), 4);
        assert_eq!(comma_free_upper_bound(4, 2).unwrap(), 2);
        // weight v means all ones, every shift identical
        assert_eq!(comma_free_upper_bound(9, 9).unwrap(), 0);
        assert_eq!(comma_free_upper_bound(9, 1).unwrap(), 2);
        assert!(comma_free_upper_bound(9, 0).is_err());
        assert!(comma_free_upper_bound(9, 10).is_err());
    }

    #[test]
    fn no_tag_beats_the_bound_at_small_sizes() {
        // exhaustive over all supports containing 0 for a few shapes
        for (v, k) in [(7usize, 3usize), (9, 3), (11, 4), (13, 3)] {
            let bound = comma_free_upper_bound(v, k).unwrap();
            let mut stack = vec![0usize];
            exhaust(v, k, &mut stack, &mut |support| {
                assert!(comma_free_index(support, v).unwrap() <= bound);
            });
        }
    }

    fn exhaust(v: usize, k: usize, prefix: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if prefix.len() == k {
            f(prefix);
            return;
        }
        let start = prefix.last().map_or(0, |&x| x + 1);
        for next in start..v {
            prefix.push(next);
            exhaust(v, k, prefix, f);
            prefix.pop();
        }
    }

    #[test]
    fn quantum_tag_certificate() {
        let tag = QuantumTag::new(27, &[0, 3, 11, 21, 26]).unwrap();
        assert_eq!(tag.k(), 5);
        assert_eq!(tag.rho(), 8);
        assert!(tag.is_optimal());
        assert_eq!(tag.decision_threshold().unwrap(), 3);

        let poor = QuantumTag::new(4, &[0, 2]).unwrap();
        assert_eq!(poor.rho(), 0);
        assert!(!poor.is_optimal());
        assert!(poor.decision_threshold().is_err());
    }

    #[test]
    fn splice_takes_tail_then_head() {
        let a = tv(7, &[0, 4, 6]);
        let b = tv(7, &[1, 2, 3]);
        // last 2 bits of a are positions 5,6 -> [0,1]; then first 5 of b
        let sp = splice(&a, &b, 2).unwrap();
        assert_eq!(sp.support(), vec![1, 3, 4, 5]);
        assert!(splice(&a, &b, 0).is_err());
        assert!(splice(&a, &b, 7).is_err());
    }

    #[test]
    fn self_splices_are_cyclic_shifts() {
        let a = tv(13, &[0, 1, 4]);
        for i in 1..13 {
            assert_eq!(splice(&a, &a, i).unwrap(), a.cyclic_shift(i as i64));
        }
    }

    #[test]
    fn code_metrics_single_codeword() {
        let (rho_c, d) = code_metrics(&[tv(7, &[0])]).unwrap();
        assert_eq!((rho_c, d), (2, 8));
        // a lone codeword's splice metric equals its cyclic comma-free index
        let (rho_c, _) = code_metrics(&[tv(27, &[0, 3, 11, 21, 26])]).unwrap();
        assert_eq!(rho_c as i64, comma_free_index(&[0, 3, 11, 21, 26], 27).unwrap());
    }

    #[test]
    fn code_metrics_of_the_small_orthogonal_pair() {
        // brute-forced independently: least splice distance 3, pair distance 4
        let pair = [tv(13, &[0, 1, 4]), tv(13, &[0, 2, 7])];
        assert_eq!(code_metrics(&pair).unwrap(), (3, 4));
    }

    #[test]
    fn code_metrics_rejects_bad_codes() {
        let a = tv(7, &[0, 1, 3]);
        assert!(matches!(
            code_metrics(&[a.clone(), a.clone()]),
            Err(Error::DuplicateCodeword(0, 1))
        ));
        let b = tv(7, &[0, 1]);
        assert!(matches!(
            code_metrics(&[a.clone(), b]),
            Err(Error::MixedWeights(3, 2))
        ));
        assert!(code_metrics(&[]).is_err());
    }

    #[test]
    fn orthogonal_set_certificate() {
        let set = OrthogonalTagSet::new(13, &[vec![0, 1, 4], vec![0, 2, 7]]).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.rho_c(), 3);
        assert_eq!(set.d(), 4);
        assert_eq!(set.decision_threshold(), 1);
    }
}

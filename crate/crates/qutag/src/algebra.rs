//! Small finite fields and number-theoretic helpers.
//!
//! Everything here runs at desk scale: fields are capped at 2^20 elements and
//! primality uses plain trial division. Field construction is fully
//! deterministic so that a field built twice (or on another machine) has the
//! same modulus and the same generator.

use crate::error::{Error, Result};

/// Largest field order `build_field` accepts.
pub const FIELD_ORDER_LIMIT: u64 = 1 << 20;

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Decomposes `n` as `p^e` with `p` prime, if possible.
///
/// Returns `None` for 0, 1, and numbers with more than one prime factor.
pub fn is_prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = smallest_prime_factor(n);
    let mut m = n;
    let mut e = 0u32;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    if m == 1 {
        Some((p, e))
    } else {
        None
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// `base^exp mod m` without overflow.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    let m = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub(crate) fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least primitive root modulo an odd prime `p`.
pub fn smallest_primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if p == 2 {
        return Err(Error::InvalidParameter(
            "primitive roots are defined here for odd primes only".into(),
        ));
    }
    let factors = distinct_prime_factors(p - 1);
    for g in 2..p {
        if factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1) {
            return Ok(g);
        }
    }
    unreachable!("every odd prime has a primitive root")
}

/// The set of `e`-th power residues modulo `p`, sorted ascending.
///
/// `e` must be one of 2, 4, 8 and must divide `p - 1`; the result then has
/// exactly `(p - 1) / e` elements, plus zero when `include_zero` is set.
pub fn power_residue_set(p: u64, e: u64, include_zero: bool) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if !matches!(e, 2 | 4 | 8) {
        return Err(Error::InvalidParameter(format!(
            "residue exponent must be 2, 4, or 8, got {e}"
        )));
    }
    if (p - 1) % e != 0 {
        return Err(Error::BadResidueExponent { e, pm1: p - 1 });
    }
    let mut set: Vec<u64> = (1..p).map(|x| pow_mod(x, e, p)).collect();
    set.sort_unstable();
    set.dedup();
    debug_assert_eq!(set.len() as u64, (p - 1) / e);
    if include_zero {
        set.insert(0, 0);
    }
    Ok(set)
}

/// An explicit representation of GF(p^e).
///
/// Elements are coefficient vectors of length `e` over GF(p), listed from the
/// constant term upward. The modulus is the lexicographically least monic
/// irreducible of degree `e` (comparing the non-leading coefficients as a
/// little-endian base-p number), and the stored generator is the primitive
/// element with the least index, where an element's index is its coefficient
/// vector read the same way. Both choices make the descriptor reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    e: u32,
    modulus: Vec<u64>,
    generator: Vec<u64>,
}

impl Field {
    /// Builds GF(p^e). Fails if `p` is not prime or `p^e` exceeds
    /// [`FIELD_ORDER_LIMIT`].
    pub fn new(p: u64, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidParameter("field degree must be positive".into()));
        }
        let order = (p as u128).pow(e);
        if order > FIELD_ORDER_LIMIT as u128 {
            return Err(Error::FieldTooLarge {
                order,
                limit: FIELD_ORDER_LIMIT,
            });
        }
        let modulus = smallest_irreducible(p, e);
        let mut field = Field {
            p,
            e,
            modulus,
            generator: vec![0; e as usize],
        };
        field.generator = field.find_generator();
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        (self.p).pow(self.e)
    }

    /// Monic modulus polynomial, constant term first, length `e + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// A fixed primitive element; its powers enumerate every nonzero element.
    pub fn generator(&self) -> &[u64] {
        &self.generator
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.e as usize]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Element whose coefficient vector encodes `idx` in base p.
    pub fn element(&self, mut idx: u64) -> Vec<u64> {
        let mut v = self.zero();
        for c in v.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        v
    }

    pub fn index_of(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let e = self.e as usize;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce by the monic modulus, highest degree first
        for d in (e..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (k, &m) in self.modulus.iter().enumerate().take(e) {
                let idx = d - e + k;
                prod[idx] = (prod[idx] + c * (self.p - m % self.p)) % self.p;
            }
        }
        prod.truncate(e);
        prod
    }

    pub fn pow(&self, a: &[u64], mut n: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Absolute trace down to GF(p): the sum of the p-power conjugates.
    /// The result always lies in the prime field and is returned as a scalar.
    pub fn trace_to_prime_subfield(&self, a: &[u64]) -> u64 {
        let mut sum = self.zero();
        let mut conj = a.to_vec();
        for _ in 0..self.e {
            sum = self.add(&sum, &conj);
            conj = self.pow(&conj, self.p);
        }
        debug_assert!(sum[1..].iter().all(|&c| c == 0));
        sum[0]
    }

    /// Relative trace onto the subfield of order `p^d`, for `d` dividing `e`.
    pub fn relative_trace(&self, a: &[u64], d: u32) -> Result<Vec<u64>> {
        if d == 0 || self.e % d != 0 {
            return Err(Error::InvalidParameter(format!(
                "subfield degree {d} does not divide {}",
                self.e
            )));
        }
        let q = (self.p).pow(d);
        let mut sum = self.zero();
        let mut conj = a.to_vec();
        for _ in 0..self.e / d {
            sum = self.add(&sum, &conj);
            conj = self.pow(&conj, q);
        }
        Ok(sum)
    }

    fn find_generator(&self) -> Vec<u64> {
        let n = self.order() - 1;
        let factors = distinct_prime_factors(n);
        for idx in 1..self.order() {
            let cand = self.element(idx);
            if factors
                .iter()
                .all(|&f| !self.is_zero(&sub_one(self, &self.pow(&cand, n / f))))
            {
                return cand;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }
}

fn sub_one(field: &Field, a: &[u64]) -> Vec<u64> {
    let mut v = a.to_vec();
    v[0] = (v[0] + field.characteristic() - 1) % field.characteristic();
    v
}

/// Least monic irreducible of degree `e` over GF(p), by the same coefficient
/// encoding `Field::element` uses for the non-leading part.
fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    let count = (p as u128).pow(e as u32);
    for t in 0..count {
        let mut coeffs = Vec::with_capacity(e + 1);
        let mut rem = t;
        for _ in 0..e {
            coeffs.push((rem % p as u128) as u64);
            rem /= p as u128;
        }
        coeffs.push(1);
        if poly_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducibles of every degree exist over GF(p)")
}

/// Rabin's criterion: f of degree e is irreducible over GF(p) iff
/// x^(p^e) = x mod f and gcd(x^(p^(e/q)) - x, f) = 1 for each prime q | e.
fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let e = (f.len() - 1) as u32;
    if e == 1 {
        return true;
    }
    let x = vec![0, 1];
    let xq = poly_pow_mod(&x, (p as u128).pow(e), f, p);
    if poly_mod_cmp(&xq, &x) != std::cmp::Ordering::Equal {
        return false;
    }
    for q in distinct_prime_factors(e as u64) {
        let sub = poly_pow_mod(&x, (p as u128).pow(e / q as u32), f, p);
        let diff = poly_sub(&sub, &x, p);
        if poly_gcd_degree(&diff, f, p) != 0 {
            return false;
        }
    }
    true
}

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    poly_trim(&mut out);
    out
}

fn poly_mod_cmp(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    a.cmp(&b)
}

fn poly_mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&mut prod, f, p);
    prod
}

fn poly_rem(a: &mut Vec<u64>, f: &[u64], p: u64) {
    let df = f.len() - 1;
    while a.len() > df {
        let d = a.len() - 1;
        let c = a[d];
        a.pop();
        if c == 0 {
            continue;
        }
        // f is monic, so subtract c * x^(d - df) * f
        for (k, &m) in f.iter().enumerate().take(df) {
            let idx = d - df + k;
            a[idx] = (a[idx] + c * (p - m % p)) % p;
        }
    }
    poly_trim(a);
}

fn poly_pow_mod(base: &[u64], mut n: u128, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    poly_rem(&mut b, f, p);
    while n > 0 {
        if n & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, f, p);
        }
        b = poly_mul_mod(&b, &b, f, p);
        n >>= 1;
    }
    acc
}

fn poly_gcd_degree(a: &[u64], b: &[u64], p: u64) -> usize {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem_of(&a, &b, p);
        a = b;
        b = r;
    }
    a.len() - 1
}

fn poly_rem_of(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let mut div = b.to_vec();
    poly_trim(&mut div);
    let db = div.len() - 1;
    if db == 0 {
        // dividing by a nonzero constant leaves no remainder
        return vec![0];
    }
    let lead_inv = pow_mod(div[db], p - 2, p);
    while r.len() - 1 >= db && !(r.len() == 1 && r[0] == 0) {
        let d = r.len() - 1;
        let c = r[d] * lead_inv % p;
        for (k, &m) in div.iter().enumerate() {
            let idx = d - db + k;
            r[idx] = (r[idx] + c * (p - m % p)) % p;
        }
        poly_trim(&mut r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(is_prime_power(8), Some((2, 3)));
        assert_eq!(is_prime_power(12), None);
        assert_eq!(is_prime_power(1), None);
        assert_eq!(is_prime_power(0), None);
        assert_eq!(is_prime_power(7), Some((7, 1)));
        assert_eq!(is_prime_power(27), Some((3, 3)));
        assert_eq!(is_prime_power(1024), Some((2, 10)));
    }

    #[test]
    fn primality_basics() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
    }

    #[test]
    fn field_moduli_are_deterministic() {
        // least irreducibles under the documented ordering
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]); // x^3 + x + 1
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]); // x^4 + x + 1
        assert_eq!(Field::new(5, 2).unwrap().modulus(), &[2, 0, 1]); // x^2 + 2
        assert_eq!(Field::new(3, 1).unwrap().modulus(), &[0, 1]); // x itself
    }

    #[test]
    fn field_order_cap_is_enforced() {
        assert!(matches!(
            Field::new(2, 21),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(Field::new(2, 20).is_ok());
    }

    #[test]
    fn generator_spans_the_multiplicative_group() {
        for (p, e) in [(2, 3), (2, 4), (3, 3), (5, 2), (7, 2)] {
            let f = Field::new(p, e).unwrap();
            let g = f.generator().to_vec();
            let n = f.order() - 1;
            let mut seen = std::collections::HashSet::new();
            let mut cur = f.one();
            for _ in 0..n {
                seen.insert(f.index_of(&cur));
                cur = f.mul(&cur, &g);
            }
            assert_eq!(cur, f.one(), "generator order must be q - 1");
            assert_eq!(seen.len() as u64, n);
        }
    }

    #[test]
    fn trace_counts_match_subfield_dimensions() {
        // GF(8): the trace-zero hyperplane has 4 elements, 3 of them nonzero.
        let f8 = Field::new(2, 3).unwrap();
        let zeros = (1..8)
            .filter(|&i| f8.trace_to_prime_subfield(&f8.element(i)) == 0)
            .count();
        assert_eq!(zeros, 3);

        // GF(27): each trace value in GF(3) is hit exactly 9 times.
        let f27 = Field::new(3, 3).unwrap();
        let mut counts = [0usize; 3];
        for i in 0..27 {
            counts[f27.trace_to_prime_subfield(&f27.element(i)) as usize] += 1;
        }
        assert_eq!(counts, [9, 9, 9]);
    }

    #[test]
    fn trace_is_additive() {
        let f = Field::new(2, 4).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let a = f.element(i);
                let b = f.element(j);
                let lhs = f.trace_to_prime_subfield(&f.add(&a, &b));
                let rhs =
                    (f.trace_to_prime_subfield(&a) + f.trace_to_prime_subfield(&b)) % 2;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn relative_trace_lands_in_the_subfield() {
        // GF(16) over GF(4): results must be fixed by the q-power Frobenius.
        let f = Field::new(2, 4).unwrap();
        for i in 0..16 {
            let t = f.relative_trace(&f.element(i), 2).unwrap();
            assert_eq!(f.pow(&t, 4), t);
        }
        assert!(f.relative_trace(&f.one(), 3).is_err());
    }

    #[test]
    fn residue_sets_match_hand_enumeration() {
        assert_eq!(power_residue_set(7, 2, false).unwrap(), vec![1, 2, 4]);
        assert_eq!(power_residue_set(11, 2, false).unwrap(), vec![1, 3, 4, 5, 9]);
        assert_eq!(power_residue_set(13, 4, true).unwrap(), vec![0, 1, 3, 9]);
        assert!(power_residue_set(7, 4, false).is_err()); // 4 does not divide 6
        assert!(power_residue_set(9, 2, false).is_err()); // not prime
    }

    #[test]
    fn residue_sets_are_multiplicatively_closed() {
        for (p, e) in [(13u64, 2u64), (13, 4), (17, 8), (41, 8)] {
            let set = power_residue_set(p, e, false).unwrap();
            assert_eq!(set.len() as u64, (p - 1) / e);
            for &a in &set {
                for &b in &set {
                    assert!(set.binary_search(&(a * b % p)).is_ok());
                }
            }
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(smallest_primitive_root(7).unwrap(), 3);
        assert_eq!(smallest_primitive_root(11).unwrap(), 2);
        assert_eq!(smallest_primitive_root(31).unwrap(), 3);
        assert!(smallest_primitive_root(8).is_err());
        assert!(smallest_primitive_root(2).is_err());
    }
}

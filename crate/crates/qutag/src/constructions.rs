//! Difference-set constructions with verified certificates.
//!
//! A support `S` in `Z_v` whose pairwise differences hit every nonzero
//! residue exactly `mu` times has a flat off-peak autocorrelation, so its tag
//! attains the comma-free bound with no floor slack: `rho = 2(k - mu)`.
//! Each constructor here re-verifies its output by brute-force difference
//! counting before returning; a certificate is never emitted unchecked.

use crate::algebra::{is_prime, is_prime_power, pow_mod, smallest_primitive_root, Field,
                     power_residue_set};
use crate::error::{Error, Result};
use crate::tags::{autocorrelation_profile, check_support, QuantumTag};

/// Which construction produced a tag. `External` covers tags loaded from
/// files or found by search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagFamily {
    Singer,
    Residue,
    Hall,
    TwinPrime,
    Complement,
    External,
}

impl TagFamily {
    pub fn name(&self) -> &'static str {
        match self {
            TagFamily::Singer => "singer",
            TagFamily::Residue => "residue",
            TagFamily::Hall => "hall",
            TagFamily::TwinPrime => "twin_prime",
            TagFamily::Complement => "complement",
            TagFamily::External => "external",
        }
    }

    pub fn parse(s: &str) -> Option<TagFamily> {
        Some(match s {
            "singer" => TagFamily::Singer,
            "residue" => TagFamily::Residue,
            "hall" => TagFamily::Hall,
            "twin_prime" => TagFamily::TwinPrime,
            "complement" => TagFamily::Complement,
            "external" => TagFamily::External,
            _ => return None,
        })
    }
}

/// Proof parameters of a verified cyclic difference set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DifferenceSetCertificate {
    pub v: usize,
    pub k: usize,
    pub mu: usize,
    pub verified: bool,
    pub family: TagFamily,
}

/// A tag plus the difference-set certificate backing its optimality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructedTag {
    pub tag: QuantumTag,
    pub certificate: DifferenceSetCertificate,
}

impl ConstructedTag {
    /// Erasure budget base for header location: `k - mu`. Streams stay
    /// exactly locatable under `delta - 1` erasures per window.
    pub fn delta(&self) -> usize {
        self.certificate.k - self.certificate.mu
    }
}

/// Checks whether `support` is a cyclic difference set in `Z_v` and returns
/// its `mu` if so. `None` means the differences are not flat.
pub fn verify_difference_set(support: &[usize], v: usize) -> Result<Option<usize>> {
    let support = check_support(v, support)?;
    let k = support.len();
    if k < 2 || k > v - 1 {
        return Err(Error::InvalidParameter(format!(
            "difference sets need 2 <= k <= v-1, got k = {k}, v = {v}"
        )));
    }
    let profile = autocorrelation_profile(&support, v)?;
    let mu = profile[1];
    for &count in &profile[1..] {
        if count != mu {
            return Ok(None);
        }
    }
    // flat profiles with mu = 0 or mu >= k are degenerate, never usable
    if mu == 0 || k <= mu {
        return Ok(None);
    }
    Ok(Some(mu))
}

fn certify(
    v: usize,
    support: Vec<usize>,
    family: TagFamily,
    expect_k: usize,
    expect_mu: usize,
    expect_rho: i64,
) -> Result<ConstructedTag> {
    let tag = QuantumTag::new(v, &support)?;
    if tag.k() != expect_k {
        return Err(Error::VerificationMismatch {
            field: "k",
            stored: expect_k as i64,
            actual: tag.k() as i64,
        });
    }
    let mu = verify_difference_set(tag.support(), v)?.ok_or(Error::NotADifferenceSet(v))?;
    if mu != expect_mu {
        return Err(Error::VerificationMismatch {
            field: "mu",
            stored: expect_mu as i64,
            actual: mu as i64,
        });
    }
    if tag.rho() != expect_rho {
        return Err(Error::VerificationMismatch {
            field: "rho",
            stored: expect_rho,
            actual: tag.rho(),
        });
    }
    Ok(ConstructedTag {
        tag,
        certificate: DifferenceSetCertificate {
            v,
            k: expect_k,
            mu,
            verified: true,
            family,
        },
    })
}

/// Hyperplane difference set in `Z_v`, `v = (q^(m+1)-1)/(q-1)`, from the
/// exponents `i` of a field generator whose relative trace onto GF(q)
/// vanishes. Parameters: `k = (q^m-1)/(q-1)`, `mu = (q^(m-1)-1)/(q-1)`.
pub fn singer_difference_set(q: u64, m: u32) -> Result<ConstructedTag> {
    let (p, s) = is_prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "need m >= 2 for a nondegenerate set, got {m}"
        )));
    }
    let field = Field::new(p, s * (m + 1))?;
    let v = ((q.pow(m + 1) - 1) / (q - 1)) as usize;
    let k = ((q.pow(m) - 1) / (q - 1)) as usize;
    let mu = ((q.pow(m - 1) - 1) / (q - 1)) as usize;

    let alpha = field.generator().to_vec();
    let mut support = Vec::with_capacity(k);
    let mut beta = field.one();
    for i in 0..v {
        let tr = field.relative_trace(&beta, s)?;
        if field.is_zero(&tr) {
            support.push(i);
        }
        beta = field.mul(&beta, &alpha);
    }
    let rho = 2 * (k as i64 - mu as i64);
    certify(v, support, TagFamily::Singer, k, mu, rho)
}

/// The five power-residue difference-set families over a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueFamily {
    /// Quadratic residues, `p = 3 mod 4`.
    Quadratic,
    /// Fourth powers, `p = 4t^2 + 1` with `t` odd.
    Quartic,
    /// Fourth powers plus zero, `p = 4t^2 + 9` with `t` odd.
    QuarticZero,
    /// Eighth powers, `p = 8t^2 + 1 = 64u^2 + 9` with `t`, `u` odd.
    Octic,
    /// Eighth powers plus zero, `p = 8t^2 + 49 = 64u^2 + 441`,
    /// `t` odd and `u` even.
    OcticZero,
}

impl ResidueFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ResidueFamily::Quadratic => "quadratic",
            ResidueFamily::Quartic => "quartic",
            ResidueFamily::QuarticZero => "quartic_zero",
            ResidueFamily::Octic => "octic",
            ResidueFamily::OcticZero => "octic_zero",
        }
    }

    pub fn parse(s: &str) -> Option<ResidueFamily> {
        Some(match s {
            "quadratic" => ResidueFamily::Quadratic,
            "quartic" => ResidueFamily::Quartic,
            "quartic_zero" => ResidueFamily::QuarticZero,
            "octic" => ResidueFamily::Octic,
            "octic_zero" => ResidueFamily::OcticZero,
            _ => return None,
        })
    }
}

/// True if `p = a*t^2 + b` for some `t` of the requested parity.
fn has_square_form(p: u64, a: u64, b: u64, t_odd: bool) -> bool {
    let mut t = if t_odd { 1u64 } else { 0u64 };
    loop {
        let val = match a.checked_mul(t * t).and_then(|x| x.checked_add(b)) {
            Some(v) => v,
            None => return false,
        };
        if val == p {
            return true;
        }
        if val > p {
            return false;
        }
        t += 2;
    }
}

fn residue_admissible(p: u64, family: ResidueFamily) -> Result<()> {
    let ok = match family {
        ResidueFamily::Quadratic => p % 4 == 3,
        ResidueFamily::Quartic => has_square_form(p, 4, 1, true),
        ResidueFamily::QuarticZero => has_square_form(p, 4, 9, true),
        ResidueFamily::Octic => has_square_form(p, 8, 1, true) && has_square_form(p, 64, 9, true),
        ResidueFamily::OcticZero => {
            has_square_form(p, 8, 49, true) && has_square_form(p, 64, 441, false)
        }
    };
    if ok {
        Ok(())
    } else {
        let reason = match family {
            ResidueFamily::Quadratic => "p mod 4 must be 3".to_string(),
            ResidueFamily::Quartic => "p must equal 4t^2 + 1 with t odd".to_string(),
            ResidueFamily::QuarticZero => "p must equal 4t^2 + 9 with t odd".to_string(),
            ResidueFamily::Octic => {
                "p must equal 8t^2 + 1 and 64u^2 + 9 with t, u odd".to_string()
            }
            ResidueFamily::OcticZero => {
                "p must equal 8t^2 + 49 and 64u^2 + 441 with t odd, u even".to_string()
            }
        };
        Err(Error::InadmissiblePrime {
            p,
            family: family.name(),
            reason,
        })
    }
}

/// Power-residue difference set modulo an admissible prime.
pub fn residue_ds(p: u64, family: ResidueFamily) -> Result<ConstructedTag> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    residue_admissible(p, family)?;
    let (exponent, with_zero) = match family {
        ResidueFamily::Quadratic => (2, false),
        ResidueFamily::Quartic => (4, false),
        ResidueFamily::QuarticZero => (4, true),
        ResidueFamily::Octic => (8, false),
        ResidueFamily::OcticZero => (8, true),
    };
    let set = power_residue_set(p, exponent, with_zero)?;
    let support: Vec<usize> = set.iter().map(|&x| x as usize).collect();

    let p_ = p as i64;
    let (k, rho) = match family {
        ResidueFamily::Quadratic => ((p_ - 1) / 2, (p_ + 1) / 2),
        ResidueFamily::Quartic => ((p_ - 1) / 4, (3 * p_ + 1) / 8),
        ResidueFamily::QuarticZero => ((p_ + 3) / 4, (3 * p_ + 9) / 8),
        ResidueFamily::Octic => ((p_ - 1) / 8, (7 * p_ + 1) / 32),
        ResidueFamily::OcticZero => ((p_ + 7) / 8, (7 * p_ + 49) / 32),
    };
    let mu = k - rho / 2;
    certify(
        p as usize,
        support,
        TagFamily::Residue,
        k as usize,
        mu as usize,
        rho,
    )
}

/// Sixth-power-class difference set for primes `p = 1 mod 6` of the form
/// `4t^2 + 27`: the classes 0, 1, 3 of exponents relative to a primitive
/// root `g` whose index of 3 is 1 mod 6. Roots are scanned in increasing
/// order so the output is reproducible.
pub fn hall_ds(p: u64) -> Result<ConstructedTag> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    let square_form = has_square_form(p, 4, 27, true) || has_square_form(p, 4, 27, false);
    if p % 6 != 1 || !square_form {
        return Err(Error::InadmissiblePrime {
            p,
            family: "hall",
            reason: "p must be 1 mod 6 and equal 4t^2 + 27".to_string(),
        });
    }

    let first = smallest_primitive_root(p)?;
    let factors = crate::algebra::distinct_prime_factors(p - 1);
    let is_primitive =
        |g: u64| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1);
    let mut root = None;
    for g in first..p {
        if is_primitive(g) && index_of_three(g, p) == Some(1) {
            root = Some(g);
            break;
        }
    }
    let g = root.ok_or_else(|| {
        Error::Infeasible(format!("no primitive root of {p} indexes 3 in class 1 mod 6"))
    })?;

    let mut support = Vec::with_capacity((p as usize - 1) / 2);
    let mut power = 1u64;
    for i in 0..p - 1 {
        if matches!(i % 6, 0 | 1 | 3) {
            support.push(power as usize);
        }
        power = power * g % p;
    }
    support.sort_unstable();

    let k = (p as usize - 1) / 2;
    let mu = (p as usize - 3) / 4;
    certify(p as usize, support, TagFamily::Hall, k, mu, (p as i64 + 1) / 2)
}

/// Discrete log of 3 base `g` reduced mod 6, or None if 3 is not a power
/// of `g`. Brute force, fine at desk scale.
fn index_of_three(g: u64, p: u64) -> Option<u64> {
    let mut power = 1u64;
    for x in 0..p - 1 {
        if power == 3 {
            return Some(x % 6);
        }
        power = power * g % p;
    }
    None
}

/// Twin-prime difference set in `Z_(p(p+2))`: residues `i = (x, y)` where
/// `x` and `y` are both nonzero squares, both nonsquares, or `y = 0`.
pub fn twin_prime_ds(p: u64) -> Result<ConstructedTag> {
    let q = p + 2;
    if !is_prime(p) || !is_prime(q) {
        return Err(Error::NotTwinPrimes(p, q));
    }
    let v = (p * q) as usize;
    let mut support = Vec::with_capacity((v - 1) / 2 + 1);
    for i in 0..v as u64 {
        let x = i % p;
        let y = i % q;
        if y == 0 || legendre(x, p) * legendre(y, q) == 1 {
            support.push(i as usize);
        }
    }
    let k = (v - 1) / 2;
    let mu = (v - 3) / 4;
    certify(v, support, TagFamily::TwinPrime, k, mu, (v as i64 + 1) / 2)
}

/// Legendre symbol by Euler's criterion: 1 for nonzero squares, -1 for
/// nonsquares, 0 for zero.
fn legendre(x: u64, p: u64) -> i64 {
    if x == 0 {
        return 0;
    }
    if pow_mod(x, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Complement set `Z_v \ S` of a verified difference set: a
/// `DS(v, v-k, v-2k+mu)`.
pub fn complement_ds(support: &[usize], v: usize) -> Result<ConstructedTag> {
    let support = check_support(v, support)?;
    let mu = verify_difference_set(&support, v)?.ok_or(Error::NotADifferenceSet(v))?;
    let k = support.len();
    let mut complement = Vec::with_capacity(v - k);
    let mut iter = support.iter().peekable();
    for i in 0..v {
        if iter.peek() == Some(&&i) {
            iter.next();
        } else {
            complement.push(i);
        }
    }
    let comp_k = v - k;
    let comp_mu = v + mu - 2 * k;
    let rho = 2 * (comp_k as i64 - comp_mu as i64);
    certify(v, complement, TagFamily::Complement, comp_k, comp_mu, rho)
}

/// Largest possible size of a `(v,k,1)` orthogonal code:
/// `floor((1/k) * floor((v-1)/(k-1)))`.
pub fn johnson_bound(v: usize, k: usize) -> Result<usize> {
    if k < 2 || v <= k {
        return Err(Error::InvalidParameter(format!(
            "bound needs v > k >= 2, got v = {v}, k = {k}"
        )));
    }
    Ok(((v - 1) / (k - 1)) / k)
}

/// Checks the correlation constraints of an optical orthogonal code: every
/// off-peak autocorrelation at most `lambda_a`, every cross-correlation
/// (all shifts, zero included) at most `lambda_c`.
pub fn verify_ooc(
    codewords: &[Vec<usize>],
    v: usize,
    lambda_a: usize,
    lambda_c: usize,
) -> Result<bool> {
    if codewords.is_empty() {
        return Err(Error::InvalidParameter("code must be nonempty".into()));
    }
    let mut validated = Vec::with_capacity(codewords.len());
    for c in codewords {
        validated.push(check_support(v, c)?);
    }
    let k = validated[0].len();
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "orthogonal codewords need weight >= 2, got {k}"
        )));
    }
    for c in &validated {
        if c.len() != k {
            return Err(Error::MixedWeights(k, c.len()));
        }
    }

    for c in &validated {
        let profile = autocorrelation_profile(c, v)?;
        if profile[1..].iter().any(|&r| r > lambda_a) {
            return Ok(false);
        }
    }
    for (i, a) in validated.iter().enumerate() {
        for b in validated.iter().skip(i + 1) {
            let mut cross = vec![0usize; v];
            for &x in a {
                for &y in b {
                    cross[(y + v - x) % v] += 1;
                }
            }
            if cross.iter().any(|&r| r > lambda_c) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

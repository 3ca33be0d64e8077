//! Exact arithmetic: rationals and elements of cyclotomic fields Q(ζ_L).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `n`, `-n` or `n/d`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Always prints `num/den`, including `n/1`.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Prime-power factors of `n`, ascending by prime.
pub fn prime_power_factors(n: u64) -> Vec<(u64, u64)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Per-conductor tables: Φ_L and the reductions of x^k mod Φ_L for k < L.
struct Field {
    deg: usize,
    pow: Vec<Vec<i64>>,
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i128; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd];
        q[k] = c;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|x| *x == 0));
    q
}

fn cyclotomic(n: u64, memo: &mut HashMap<u64, Vec<i128>>) -> Vec<i128> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let mut den = vec![1i128];
    for d in divisors(n) {
        if d < n {
            let phi_d = cyclotomic(d, memo);
            den = poly_mul(&den, &phi_d);
        }
    }
    let p = poly_div_exact(&num, &den);
    memo.insert(n, p.clone());
    p
}

fn field(l: u64) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(f) = guard.get(&l) {
        return f.clone();
    }
    let mut memo = HashMap::new();
    let phi = cyclotomic(l, &mut memo);
    let deg = phi.len() - 1;
    let mut pow = Vec::with_capacity(l as usize);
    let mut cur = vec![0i128; deg];
    if deg > 0 {
        cur[0] = 1;
    }
    for _ in 0..l {
        pow.push(
            cur.iter()
                .map(|&x| i64::try_from(x).expect("cyclotomic table overflow"))
                .collect(),
        );
        // multiply by x and reduce
        let top = if deg > 0 { cur[deg - 1] } else { 0 };
        let mut next = vec![0i128; deg];
        for i in (1..deg).rev() {
            next[i] = cur[i - 1];
        }
        for i in 0..deg {
            next[i] -= top * phi[i];
        }
        cur = next;
    }
    let f = Arc::new(Field { deg, pow });
    guard.insert(l, f.clone());
    f
}

/// An element of Q(ζ_L) stored as `num / den` over the power basis 1, ζ, …, ζ^{φ(L)−1}
/// reduced modulo Φ_L. Canonical: den > 0, gcd(num…, den) = 1, zero has den = 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    conductor: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclo {
    pub fn zero(l: u64) -> Cyclo {
        assert!(l >= 1, "conductor must be positive");
        let deg = field(l).deg;
        Cyclo {
            conductor: l,
            num: vec![BigInt::zero(); deg],
            den: BigInt::one(),
        }
    }

    pub fn one(l: u64) -> Cyclo {
        Cyclo::from_rat(l, &Rat::one())
    }

    pub fn from_rat(l: u64, r: &Rat) -> Cyclo {
        let mut c = Cyclo::zero(l);
        c.num[0] = r.numer().clone();
        c.den = r.denom().clone();
        c.normalize();
        c
    }

    pub fn from_int(l: u64, n: i64) -> Cyclo {
        Cyclo::from_rat(l, &rat_int(n))
    }

    /// ζ_L^k.
    pub fn root(l: u64, k: i64) -> Cyclo {
        let f = field(l);
        let idx = k.rem_euclid(l as i64) as usize;
        Cyclo {
            conductor: l,
            num: f.pow[idx].iter().map(|&x| BigInt::from(x)).collect(),
            den: BigInt::one(),
        }
    }

    /// r · ζ_L^k.
    pub fn scaled_root(l: u64, r: &Rat, k: i64) -> Cyclo {
        Cyclo::root(l, k).scale(r)
    }

    /// Σ_k counts[k] ζ_L^k for integer counts indexed by exponent mod L.
    pub fn from_exponent_counts(l: u64, counts: &[BigInt]) -> Cyclo {
        let f = field(l);
        let mut num = vec![BigInt::zero(); f.deg];
        for (k, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, t) in f.pow[k % l as usize].iter().enumerate() {
                if *t != 0 {
                    num[i] += c * t;
                }
            }
        }
        let mut out = Cyclo {
            conductor: l,
            num,
            den: BigInt::one(),
        };
        out.normalize();
        out
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.num.len()
    }

    pub fn coeff(&self, k: usize) -> Rat {
        Rat::new(self.num[k].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<Rat> {
        (0..self.num.len()).map(|k| self.coeff(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|x| x.is_zero())
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.num[1..].iter().all(|x| x.is_zero()) {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for x in self.num.iter_mut() {
                *x = -x.clone();
            }
        }
        let mut g = self.den.clone();
        for x in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            self.den /= &g;
            for x in self.num.iter_mut() {
                *x /= &g;
            }
        }
    }

    fn check(&self, other: &Cyclo) -> Result<()> {
        if self.conductor != other.conductor {
            return Err(Error::ConductorMismatch(self.conductor, other.conductor));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Cyclo) -> Result<Cyclo> {
        self.check(other)?;
        let den = &self.den * &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        let mut out = Cyclo {
            conductor: self.conductor,
            num,
            den,
        };
        out.normalize();
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Cyclo) -> Result<Cyclo> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Cyclo::zero(self.conductor));
        }
        let f = field(self.conductor);
        let l = self.conductor as usize;
        let mut prod = vec![BigInt::zero(); 2 * f.deg];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num = vec![BigInt::zero(); f.deg];
        for (k, c) in prod.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, t) in f.pow[k % l].iter().enumerate() {
                if *t != 0 {
                    num[i] += c * t;
                }
            }
        }
        let mut out = Cyclo {
            conductor: self.conductor,
            num,
            den: &self.den * &other.den,
        };
        out.normalize();
        Ok(out)
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        self.checked_add(other).expect("conductor mismatch")
    }

    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        self.checked_mul(other).expect("conductor mismatch")
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            conductor: self.conductor,
            num: self.num.iter().map(|x| -x).collect(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Cyclo {
        let mut out = Cyclo {
            conductor: self.conductor,
            num: self.num.iter().map(|x| x * r.numer()).collect(),
            den: &self.den * r.denom(),
        };
        out.normalize();
        out
    }

    pub fn scale_int(&self, n: &BigInt) -> Cyclo {
        self.scale(&Rat::from_integer(n.clone()))
    }

    /// The automorphism ζ ↦ ζ^a, gcd(a, L) = 1.
    pub fn galois(&self, a: i64) -> Cyclo {
        let f = field(self.conductor);
        let l = self.conductor as i64;
        let mut num = vec![BigInt::zero(); f.deg];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = (a * k as i64).rem_euclid(l) as usize;
            for (i, t) in f.pow[idx].iter().enumerate() {
                if *t != 0 {
                    num[i] += c * t;
                }
            }
        }
        let mut out = Cyclo {
            conductor: self.conductor,
            num,
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    pub fn conj(&self) -> Cyclo {
        self.galois(-1)
    }

    /// Image under Q(ζ_L) ⊂ Q(ζ_M); requires L | M.
    pub fn embed(&self, m: u64) -> Result<Cyclo> {
        if m % self.conductor != 0 {
            return Err(Error::ConductorMismatch(self.conductor, m));
        }
        let f = field(m);
        let step = (m / self.conductor) as usize;
        let mut num = vec![BigInt::zero(); f.deg];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, t) in f.pow[(k * step) % m as usize].iter().enumerate() {
                if *t != 0 {
                    num[i] += c * t;
                }
            }
        }
        let mut out = Cyclo {
            conductor: m,
            num,
            den: self.den.clone(),
        };
        out.normalize();
        Ok(out)
    }

    /// Value equality, embedding both sides into the lcm conductor.
    pub fn eq_value(&self, other: &Cyclo) -> bool {
        if self.conductor == other.conductor {
            return self == other;
        }
        let m = lcm(self.conductor, other.conductor);
        self.embed(m).unwrap() == other.embed(m).unwrap()
    }

    pub fn pow(&self, e: u64) -> Cyclo {
        let mut base = self.clone();
        let mut acc = Cyclo::one(self.conductor);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn units(&self) -> Vec<i64> {
        let l = self.conductor as i64;
        (1..=l.max(1)).filter(|a| a.gcd(&l) == 1).collect()
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> Rat {
        let mut acc = Cyclo::one(self.conductor);
        for a in self.units() {
            acc = acc.mul(&self.galois(a));
        }
        acc.as_rat().expect("norm is rational")
    }

    pub fn inv(&self) -> Result<Cyclo> {
        if self.is_zero() {
            return Err(Error::Precondition("inverse of zero".into()));
        }
        let mut others = Cyclo::one(self.conductor);
        for a in self.units() {
            if a % self.conductor as i64 != 1 % self.conductor as i64 {
                others = others.mul(&self.galois(a));
            }
        }
        let n = self.mul(&others).as_rat().expect("norm is rational");
        Ok(others.scale(&(Rat::one() / n)))
    }

    /// x · conj(x), which is always real.
    pub fn abs2(&self) -> Cyclo {
        self.mul(&self.conj())
    }

    /// Exponent k with self = ζ_L^k, if any.
    pub fn root_exponent(&self) -> Option<u64> {
        (0..self.conductor).find(|&k| *self == Cyclo::root(self.conductor, k as i64))
    }

    /// (r, k) with self = r · ζ_n^k and r ≥ 0 rational, where n | L.
    pub fn as_phased(&self, n: u64) -> Option<(Rat, u64)> {
        if self.is_zero() {
            return Some((Rat::zero(), 0));
        }
        if self.conductor % n != 0 {
            return None;
        }
        let step = (self.conductor / n) as i64;
        for k in 0..n {
            let t = self.mul(&Cyclo::root(self.conductor, -(k as i64) * step));
            if let Some(r) = t.as_rat() {
                if r.is_positive() {
                    return Some((r, k));
                }
            }
        }
        None
    }

    /// The same value at the smallest conductor d | L whose field contains it.
    pub fn minimal(&self) -> Cyclo {
        let l = self.conductor;
        for d in divisors(l) {
            if d == l {
                break;
            }
            let fixed = self
                .units()
                .into_iter()
                .filter(|a| (a - 1).rem_euclid(d as i64) == 0)
                .all(|a| self.galois(a) == *self);
            if !fixed {
                continue;
            }
            if let Some(c) = self.descend(d) {
                return c;
            }
        }
        self.clone()
    }

    fn descend(&self, d: u64) -> Option<Cyclo> {
        let deg_d = field(d).deg;
        let basis: Vec<Vec<Rat>> = (0..deg_d)
            .map(|k| {
                Cyclo::root(d, k as i64)
                    .embed(self.conductor)
                    .unwrap()
                    .coeffs()
            })
            .collect();
        // columns = basis vectors, solve basis^T y = self
        let rows = self.degree();
        let mut m: Vec<Vec<Rat>> = (0..rows)
            .map(|i| {
                let mut row: Vec<Rat> = basis.iter().map(|b| b[i].clone()).collect();
                row.push(self.coeff(i));
                row
            })
            .collect();
        let y = solve_rational(&mut m, deg_d)?;
        let mut out = Cyclo::zero(d);
        for (k, yk) in y.iter().enumerate() {
            out = out.add(&Cyclo::root(d, k as i64).scale(yk));
        }
        if out.embed(self.conductor).unwrap() == *self {
            Some(out)
        } else {
            None
        }
    }

    /// Floating-point rendering; display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let l = self.conductor as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let t = 2.0 * std::f64::consts::PI * k as f64 / l;
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }
}

/// Gaussian elimination on an augmented matrix with `n` unknowns; None if inconsistent.
fn solve_rational(m: &mut [Vec<Rat>], n: usize) -> Option<Vec<Rat>> {
    let rows = m.len();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=n {
                    let t = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut y = vec![Rat::zero(); n];
    for (i, &c) in piv_cols.iter().enumerate() {
        y[c] = m[i][n].clone();
    }
    Some(y)
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[L={}](", self.conductor)?;
        let mut first = true;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}/{}·ζ^{}", c, self.den, k)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Solves b_j = Σ_i c_i x_i^j, j = 1..n, for c.
pub fn vandermonde_solve(points: &[Cyclo], values: &[Cyclo]) -> Result<Vec<Cyclo>> {
    let n = points.len();
    if values.len() != n {
        return Err(Error::Precondition(
            "points and values differ in length".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let l = points[0].conductor();
    for p in points.iter().chain(values) {
        if p.conductor() != l {
            return Err(Error::ConductorMismatch(l, p.conductor()));
        }
    }
    for (i, p) in points.iter().enumerate() {
        if p.is_zero() {
            return Err(Error::Precondition(format!("point {i} is zero")));
        }
        if points[..i].contains(p) {
            return Err(Error::Precondition(format!("point {i} is repeated")));
        }
    }
    // row j: x_1^{j+1} … x_n^{j+1} | b_{j+1}
    let mut m: Vec<Vec<Cyclo>> = (0..n)
        .map(|j| {
            let mut row: Vec<Cyclo> = points.iter().map(|x| x.pow(j as u64 + 1)).collect();
            row.push(values[j].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !m[i][c].is_zero())
            .expect("Vandermonde matrix is non-singular");
        m.swap(c, p);
        let inv = m[c][c].inv()?;
        for x in m[c].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=n {
                    let t = m[c][j].mul(&f);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}

/// magnitude · ζ_ω^phase, with ω supplied by the owning instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasedMagnitude {
    pub magnitude: Rat,
    pub phase: u64,
}

impl PhasedMagnitude {
    pub fn new(magnitude: Rat, phase: i64, omega: u64) -> PhasedMagnitude {
        assert!(!magnitude.is_negative(), "magnitude must be non-negative");
        let phase = if magnitude.is_zero() {
            0
        } else {
            phase.rem_euclid(omega as i64) as u64
        };
        PhasedMagnitude { magnitude, phase }
    }

    pub fn zero() -> PhasedMagnitude {
        PhasedMagnitude {
            magnitude: Rat::zero(),
            phase: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.magnitude.is_zero()
    }

    /// Value as an element of Q(ζ_L); requires ω | L.
    pub fn to_cyclo(&self, omega: u64, l: u64) -> Cyclo {
        assert!(l % omega == 0);
        Cyclo::scaled_root(l, &self.magnitude, (self.phase * (l / omega)) as i64)
    }

    pub fn conj(&self, omega: u64) -> PhasedMagnitude {
        PhasedMagnitude::new(self.magnitude.clone(), -(self.phase as i64), omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_basic() {
        assert!(Cyclo::root(1, 0).is_one());
        assert_eq!(Cyclo::root(2, 1), Cyclo::from_int(2, -1));
        let i = Cyclo::root(4, 1);
        assert_eq!(i.mul(&i), Cyclo::root(4, 2));
        assert_eq!(Cyclo::root(4, 2), Cyclo::from_int(4, -1));
    }

    #[test]
    fn field_identities() {
        assert_eq!(Cyclo::root(4, 1).conj(), Cyclo::root(4, 3));
        let s = Cyclo::root(3, 1).add(&Cyclo::root(3, 2));
        assert_eq!(s, Cyclo::from_int(3, -1));
        assert_eq!(Cyclo::root(6, 1), Cyclo::root(6, 4).neg());
        assert!(Cyclo::root(6, 1).eq_value(&Cyclo::root(3, 2).neg()));
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(Cyclo::one(3).checked_add(&Cyclo::one(4)).is_err());
    }

    #[test]
    fn inverse_and_norm() {
        let x = Cyclo::root(5, 1).add(&Cyclo::from_int(5, 2));
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        assert_eq!(Cyclo::from_int(7, 3).norm(), rat_int(729));
    }

    #[test]
    fn minimal_conductor() {
        let x = Cyclo::root(3, 1).embed(12).unwrap();
        let m = x.minimal();
        assert_eq!(m.conductor(), 3);
        assert_eq!(m, Cyclo::root(3, 1));
        assert_eq!(Cyclo::from_int(8, 5).minimal().conductor(), 1);
        // sqrt(2) lives in Q(ζ_8) but not Q(ζ_4)
        let s2 = Cyclo::root(8, 1).add(&Cyclo::root(8, -1));
        assert_eq!(s2.minimal().conductor(), 8);
    }

    #[test]
    fn vandermonde_examples() {
        let c = vandermonde_solve(&[Cyclo::from_int(1, 1)], &[Cyclo::from_int(1, 5)]).unwrap();
        assert_eq!(c, vec![Cyclo::from_int(1, 5)]);
        let pts = [Cyclo::from_int(1, 1), Cyclo::from_int(1, 2)];
        let vals = [Cyclo::from_int(1, 3), Cyclo::from_int(1, 5)];
        let c = vandermonde_solve(&pts, &vals).unwrap();
        assert_eq!(c, vec![Cyclo::from_int(1, 1), Cyclo::from_int(1, 1)]);
        assert!(vandermonde_solve(&[Cyclo::zero(1)], &[Cyclo::one(1)]).is_err());
        let dup = [Cyclo::one(1), Cyclo::one(1)];
        assert!(vandermonde_solve(&dup, &dup).is_err());
    }

    #[test]
    fn phased() {
        let p = PhasedMagnitude::new(rat(3, 2), 5, 4);
        assert_eq!(p.phase, 1);
        let c = p.to_cyclo(4, 8);
        assert_eq!(c.as_phased(4), Some((rat(3, 2), 1)));
        assert_eq!(
            PhasedMagnitude::new(Rat::zero(), 3, 4),
            PhasedMagnitude::zero()
        );
    }

    #[test]
    fn rat_parsing() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-4").unwrap(), rat_int(-4));
        assert!(parse_rat("1/0").is_err());
        assert_eq!(fmt_rat(&rat_int(2)), "2/1");
    }
}

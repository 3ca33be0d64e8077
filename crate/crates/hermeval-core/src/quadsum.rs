//! Degree-2 exponential sums Σ_X ζ_q^{f(X)} over Z_q, q a prime power.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{prime_power_factors, Cyclo, Rat};

/// f(X) = Σ_{i≤j} c_ij X_i X_j + Σ c_i X_i + c_0 over Z_q, variable X_i ranging over Z_{ord(X_i)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    q: u64,
    orders: Vec<u64>,
    quad: Vec<Vec<u64>>,
    lin: Vec<u64>,
    c0: u64,
}

impl QuadraticForm {
    pub fn new(q: u64, n: usize) -> QuadraticForm {
        assert!(q >= 1);
        QuadraticForm {
            q,
            orders: vec![q; n],
            quad: vec![vec![0; n]; n],
            lin: vec![0; n],
            c0: 0,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn var_count(&self) -> usize {
        self.lin.len()
    }

    fn red(&self, c: i64) -> u64 {
        c.rem_euclid(self.q as i64) as u64
    }

    pub fn add_var(&mut self, order: u64) -> usize {
        assert!(order >= 1 && self.q % order == 0, "order must divide q");
        for row in self.quad.iter_mut() {
            row.push(0);
        }
        let n = self.lin.len() + 1;
        self.quad.push(vec![0; n]);
        self.lin.push(0);
        self.orders.push(order);
        n - 1
    }

    pub fn set_order(&mut self, i: usize, order: u64) {
        assert!(order >= 1 && self.q % order == 0, "order must divide q");
        self.orders[i] = order;
    }

    pub fn order(&self, i: usize) -> u64 {
        self.orders[i]
    }

    /// Adds c·X_i·X_j (i = j gives a square).
    pub fn add_quad(&mut self, i: usize, j: usize, c: i64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.quad[i][j] = (self.quad[i][j] + self.red(c)) % self.q;
    }

    pub fn add_lin(&mut self, i: usize, c: i64) {
        self.lin[i] = (self.lin[i] + self.red(c)) % self.q;
    }

    pub fn add_const(&mut self, c: i64) {
        self.c0 = (self.c0 + self.red(c)) % self.q;
    }

    pub fn quad(&self, i: usize, j: usize) -> u64 {
        if i <= j {
            self.quad[i][j]
        } else {
            self.quad[j][i]
        }
    }

    pub fn lin(&self, i: usize) -> u64 {
        self.lin[i]
    }

    pub fn constant(&self) -> u64 {
        self.c0
    }

    pub fn eval_at(&self, x: &[u64]) -> u64 {
        let q = self.q as u128;
        let n = self.var_count();
        let mut acc = self.c0 as u128;
        for i in 0..n {
            let xi = x[i] as u128 % q;
            acc += self.lin[i] as u128 * xi % q;
            for j in i..n {
                acc += self.quad[i][j] as u128 * (xi * (x[j] as u128 % q) % q) % q;
            }
            acc %= q;
        }
        acc as u64
    }

    /// Every non-constant monomial is well defined on Z_{ord(X_i)}.
    pub fn is_consistent(&self) -> bool {
        let q = self.q as u128;
        let n = self.var_count();
        for i in 0..n {
            let oi = self.orders[i] as u128;
            if self.lin[i] as u128 * oi % q != 0 {
                return false;
            }
            let c = self.quad[i][i] as u128;
            // the second test only bites when ord(X_i) = 1
            if 2 * c * oi % q != 0 || c * oi * oi % q != 0 {
                return false;
            }
            for j in i + 1..n {
                let c = self.quad[i][j] as u128;
                if c * oi % q != 0 || c * self.orders[j] as u128 % q != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Same form with every order q, plus Π q/ord(X_i).
    pub fn lift_orders(&self) -> Result<(QuadraticForm, Rat)> {
        if !self.is_consistent() {
            return Err(Error::Precondition(
                "form is not consistent with its variable orders".into(),
            ));
        }
        let mult: BigInt = self
            .orders
            .iter()
            .map(|&o| BigInt::from(self.q / o))
            .product();
        let mut g = self.clone();
        g.orders = vec![self.q; self.var_count()];
        Ok((g, Rat::from_integer(mult)))
    }

    /// Block sum: variables of `other` are appended after those of `self`.
    pub fn direct_sum(&self, other: &QuadraticForm) -> QuadraticForm {
        assert_eq!(self.q, other.q);
        let n = self.var_count();
        let mut out = self.clone();
        for i in 0..other.var_count() {
            out.add_var(other.orders[i]);
        }
        for i in 0..other.var_count() {
            out.add_lin(n + i, other.lin[i] as i64);
            for j in i..other.var_count() {
                out.add_quad(n + i, n + j, other.quad[i][j] as i64);
            }
        }
        out.add_const(other.c0 as i64);
        out
    }

    /// f(P·X): the result's variable i is old variable perm[i].
    pub fn permute_vars(&self, perm: &[usize]) -> QuadraticForm {
        let n = self.var_count();
        let mut out = QuadraticForm::new(self.q, n);
        for i in 0..n {
            out.orders[i] = self.orders[perm[i]];
            out.add_lin(i, self.lin[perm[i]] as i64);
            for j in i..n {
                out.add_quad(i, j, self.quad(perm[i], perm[j]) as i64);
            }
        }
        out.add_const(self.c0 as i64);
        out
    }
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Affine-linear form α_0 + Σ α_j X_j over Z_q.
#[derive(Clone)]
struct Lin {
    c: u64,
    a: Vec<u64>,
}

impl Lin {
    fn scale(&self, k: u64, q: u64) -> Lin {
        Lin {
            c: self.c * k % q,
            a: self.a.iter().map(|x| x * k % q).collect(),
        }
    }
    fn add(&self, o: &Lin, q: u64) -> Lin {
        Lin {
            c: (self.c + o.c) % q,
            a: self.a.iter().zip(&o.a).map(|(x, y)| (x + y) % q).collect(),
        }
    }
}

/// Working state: the alive variables of a form over Z_q, all of order q.
struct Work {
    q: u64,
    alive: Vec<bool>,
    quad: Vec<Vec<u64>>,
    lin: Vec<u64>,
    c0: u64,
}

impl Work {
    fn cross(&self, i: usize, j: usize) -> u64 {
        if i <= j {
            self.quad[i][j]
        } else {
            self.quad[j][i]
        }
    }

    fn add_quad(&mut self, i: usize, j: usize, c: u64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.quad[i][j] = (self.quad[i][j] + c) % self.q;
    }

    /// Coefficient of X_v in f, as a linear form in the other alive variables.
    fn linear_part(&self, v: usize) -> Lin {
        let n = self.lin.len();
        let mut a = vec![0; n];
        for (j, aj) in a.iter_mut().enumerate() {
            if j != v && self.alive[j] {
                *aj = self.cross(v, j);
            }
        }
        Lin { c: self.lin[v], a }
    }

    fn remove(&mut self, v: usize) {
        self.alive[v] = false;
        let n = self.lin.len();
        for j in 0..n {
            self.quad[v.min(j)][v.max(j)] = 0;
        }
        self.lin[v] = 0;
    }

    /// f ← f − k·(l1·l2).
    fn sub_product(&mut self, k: u64, l1: &Lin, l2: &Lin) {
        let q = self.q;
        let neg = (q - k % q) % q;
        let n = self.lin.len();
        self.c0 = (self.c0 + neg * (l1.c * l2.c % q)) % q;
        for i in 0..n {
            let lc = (l1.c * l2.a[i] + l2.c * l1.a[i]) % q;
            self.lin[i] = (self.lin[i] + neg * lc) % q;
            for j in 0..n {
                let c = l1.a[i] * l2.a[j] % q;
                if c != 0 {
                    self.add_quad(i, j, neg * c % q);
                }
            }
        }
    }

    fn reduce_mod(&mut self, q: u64) {
        self.q = q;
        for row in self.quad.iter_mut() {
            for x in row.iter_mut() {
                *x %= q;
            }
        }
        for x in self.lin.iter_mut() {
            *x %= q;
        }
        self.c0 %= q;
    }
}

thread_local! {
    /// Small Gauss sums keyed by (conductor, q, a, b, d); b = d = u64::MAX marks the one-variable sum.
    static GAUSS: RefCell<HashMap<(u64, u64, u64, u64, u64), Cyclo>> = RefCell::new(HashMap::new());
}

struct GaussCache {
    top: u64,
}

impl GaussCache {
    fn cached(&self, key: (u64, u64, u64, u64), counts: impl FnOnce() -> Vec<u64>) -> Cyclo {
        let (q, a, b, d) = key;
        let key = (self.top, q, a, b, d);
        if let Some(c) = GAUSS.with(|m| m.borrow().get(&key).cloned()) {
            return c;
        }
        let step = (self.top / q) as usize;
        let mut c = vec![BigInt::zero(); self.top as usize];
        for (k, x) in counts().into_iter().enumerate() {
            c[k * step] = BigInt::from(x);
        }
        let v = Cyclo::from_exponent_counts(self.top, &c);
        GAUSS.with(|m| m.borrow_mut().insert(key, v.clone()));
        v
    }

    fn g1(&self, a: u64, q: u64) -> Cyclo {
        self.cached((q, a, u64::MAX, u64::MAX), || {
            let mut counts = vec![0u64; q as usize];
            for x in 0..q {
                counts[(a * x % q * x % q) as usize] += 1;
            }
            counts
        })
    }

    fn g2(&self, a: u64, b: u64, d: u64, q: u64) -> Cyclo {
        self.cached((q, a, b, d), || {
            let mut counts = vec![0u64; q as usize];
            for x in 0..q {
                for y in 0..q {
                    counts[((a * x % q * x + b * x % q * y + d * y % q * y) % q) as usize] += 1;
                }
            }
            counts
        })
    }
}

/// Exact Z_q(f) = Σ_{X ∈ Z_q^n} ζ_q^{f(X)}, ζ_q = e^{2πi/q}, at conductor q.
pub fn eval_q(f: &QuadraticForm) -> Result<Cyclo> {
    let top = f.q;
    let pp = prime_power_factors(top);
    if pp.len() > 1 {
        return Err(Error::Precondition(format!(
            "modulus {top} is not a prime power"
        )));
    }
    if f.orders.iter().any(|&o| o != top) {
        return Err(Error::Precondition(
            "eval_q needs every variable of full order".into(),
        ));
    }
    if top == 1 {
        return Ok(Cyclo::one(1));
    }
    let p = pp[0].0;
    let n = f.var_count();
    let mut w = Work {
        q: top,
        alive: vec![true; n],
        quad: f.quad.clone(),
        lin: f.lin.clone(),
        c0: f.c0,
    };
    let cache = GaussCache { top };
    let mut acc = Cyclo::one(top);
    let mut pscale = BigInt::one();
    loop {
        let q = w.q;
        if q == 1 {
            break;
        }
        if q == 2 {
            for i in 0..n {
                if w.alive[i] && w.quad[i][i] != 0 {
                    w.lin[i] = (w.lin[i] + w.quad[i][i]) % 2;
                    w.quad[i][i] = 0;
                }
            }
        }
        let alive: Vec<usize> = (0..n).filter(|&i| w.alive[i]).collect();
        if alive.is_empty() {
            break;
        }
        let unit = |c: u64| c % p != 0;
        let diag = alive.iter().copied().find(|&i| {
            unit(w.quad[i][i])
                && (p != 2 || alive.iter().all(|&j| j == i || w.cross(i, j) % 2 == 0))
        });
        let cross = || {
            for (x, &i) in alive.iter().enumerate() {
                for &j in &alive[x + 1..] {
                    if unit(w.cross(i, j)) {
                        return Some((i, j));
                    }
                }
            }
            None
        };
        let pair = if p == 2 { cross() } else { None };
        if let (Some(i), None) = (diag, pair) {
            let a = w.quad[i][i];
            let l = w.linear_part(i);
            w.remove(i);
            if p == 2 {
                if l.c % 2 == 1 {
                    // shifting X_i by q/2 multiplies the inner sum by −1
                    return Ok(Cyclo::zero(top));
                }
                let half = Lin {
                    c: l.c / 2,
                    a: l.a.iter().map(|x| x / 2).collect(),
                };
                let ainv = inv_mod(a, q).unwrap();
                w.sub_product(ainv, &half, &half);
            } else {
                let inv4a = inv_mod(4 * a % q, q).unwrap();
                w.sub_product(inv4a, &l, &l);
            }
            acc = acc.mul(&cache.g1(a, q));
            continue;
        }
        if let Some((i, j)) = pair.or_else(cross) {
            let (a, b, d) = (w.quad[i][i], w.cross(i, j), w.quad[j][j]);
            let mut l1 = w.linear_part(i);
            let mut l2 = w.linear_part(j);
            l1.a[j] = 0;
            l2.a[i] = 0;
            w.remove(i);
            w.remove(j);
            let det = (4 * a % q * d % q + q * q - b * b % q) % q;
            let dinv = inv_mod(det, q).expect("unit determinant");
            let s1 = l1
                .scale(2 * d % q, q)
                .add(&l2.scale((q - b) % q, q), q)
                .scale(dinv, q);
            let s2 = l1
                .scale((q - b) % q, q)
                .add(&l2.scale(2 * a % q, q), q)
                .scale(dinv, q);
            w.sub_product(a, &s1, &s1);
            w.sub_product(b, &s1, &s2);
            w.sub_product(d, &s2, &s2);
            acc = acc.mul(&cache.g2(a, b, d, q));
            continue;
        }
        // every quadratic coefficient is divisible by p
        if alive.iter().any(|&i| w.lin[i] % p != 0) {
            return Ok(Cyclo::zero(top));
        }
        let step = top / q;
        acc = acc.mul(&Cyclo::root(top, (w.c0 * step) as i64));
        w.c0 = 0;
        for i in 0..n {
            w.lin[i] /= p;
            for j in i..n {
                w.quad[i][j] /= p;
            }
        }
        pscale *= BigInt::from(p).pow(alive.len() as u32);
        w.reduce_mod(q / p);
    }
    let step = top / w.q;
    acc = acc.mul(&Cyclo::root(top, (w.c0 * step) as i64));
    Ok(acc.scale_int(&pscale))
}

/// Direct summation over X_i ∈ Z_{ord(X_i)}, at conductor q.
pub fn eval_q_bruteforce(f: &QuadraticForm) -> Cyclo {
    let q = f.q;
    let n = f.var_count();
    let mut counts = vec![BigInt::zero(); q as usize];
    let mut x = vec![0u64; n];
    loop {
        counts[f.eval_at(&x) as usize] += 1;
        let mut t = n;
        loop {
            if t == 0 {
                return Cyclo::from_exponent_counts(q, &counts);
            }
            t -= 1;
            x[t] += 1;
            if x[t] < f.orders[t] {
                break;
            }
            x[t] = 0;
        }
    }
}

/// Restricted sum via order lifting and `eval_q`.
pub fn eval_restricted(f: &QuadraticForm) -> Result<Cyclo> {
    let (g, mult) = f.lift_orders()?;
    Ok(eval_q(&g)?.scale(&(Rat::one() / mult)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(q: u64) -> QuadraticForm {
        let mut f = QuadraticForm::new(q, 1);
        f.add_quad(0, 0, 1);
        f
    }

    #[test]
    fn small_gauss_sums() {
        let mut f = QuadraticForm::new(5, 0);
        f.add_const(3);
        assert_eq!(eval_q(&f).unwrap(), Cyclo::root(5, 3));
        assert!(eval_q(&square(2)).unwrap().is_zero());
        let z3 = Cyclo::from_int(3, 1).add(&Cyclo::root(3, 1).scale_int(&BigInt::from(2)));
        assert_eq!(eval_q(&square(3)).unwrap(), z3);
        let z4 = Cyclo::from_int(4, 2).add(&Cyclo::root(4, 1).scale_int(&BigInt::from(2)));
        assert_eq!(eval_q(&square(4)).unwrap(), z4);
        let (re, im) = z3.to_complex();
        assert!(re.abs() < 1e-12 && (im - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn consistency_examples() {
        let mut f = QuadraticForm::new(4, 1);
        f.set_order(0, 2);
        f.add_lin(0, 2);
        assert!(f.is_consistent());
        let mut g = QuadraticForm::new(4, 1);
        g.set_order(0, 2);
        g.add_lin(0, 1);
        assert!(!g.is_consistent());
        assert!(g.lift_orders().is_err());
        assert!(eval_q_bruteforce(&f).is_zero());
        let (h, m) = f.lift_orders().unwrap();
        assert_eq!(m, Rat::from_integer(BigInt::from(2)));
        assert!(eval_q(&h).unwrap().is_zero());
    }

    #[test]
    fn zero_form() {
        let f = QuadraticForm::new(9, 3);
        assert_eq!(eval_q(&f).unwrap(), Cyclo::from_int(9, 729));
        assert_eq!(eval_q_bruteforce(&f), Cyclo::from_int(9, 729));
    }

    #[test]
    fn rejects_composite() {
        assert!(eval_q(&QuadraticForm::new(6, 1)).is_err());
    }

    #[test]
    fn exhaustive_two_variables() {
        for q in [2u64, 3, 4] {
            let qi = q as i64;
            for c00 in 0..qi {
                for c01 in 0..qi {
                    for c11 in 0..qi {
                        for l0 in 0..qi {
                            for l1 in 0..qi {
                                let mut f = QuadraticForm::new(q, 2);
                                f.add_quad(0, 0, c00);
                                f.add_quad(0, 1, c01);
                                f.add_quad(1, 1, c11);
                                f.add_lin(0, l0);
                                f.add_lin(1, l1);
                                f.add_const(1);
                                assert_eq!(eval_q(&f).unwrap(), eval_q_bruteforce(&f), "{f:?}");
                            }
                        }
                    }
                }
            }
        }
    }
}

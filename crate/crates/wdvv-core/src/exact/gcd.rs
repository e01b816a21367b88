//! Multivariate polynomial GCD: modular degree probes prove trivial gcds
//! outright, a certified integer-evaluation heuristic handles most nontrivial
//! ones, and a primitive pseudo-remainder sequence is the complete fallback.
//! The result is normalized monic (leading coefficient 1 in the fixed
//! monomial order), which makes it canonical.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{q, Monomial, Poly, Scalar};
use super::vars::Var;

// ---------------------------------------------------------------------------
// Modular degree probe
//
// Specializing every variable but one at random residues modulo a prime maps
// gcd(a, b) to a divisor of the univariate gcd of the images. When the
// specialization preserves the leading coefficient of both inputs in the
// chosen variable, the image of the gcd keeps its full degree, so a constant
// univariate gcd proves that the true gcd is free of that variable. The probe
// is therefore sound for triviality detection and is otherwise used only as a
// heuristic to pick a good main variable.
// ---------------------------------------------------------------------------

const PROBE_PRIME: u64 = (1 << 61) - 1;

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let m = x % BigInt::from(p);
    let r = m.abs().to_u64().expect("residue fits in u64");
    if m.is_negative() && r != 0 {
        p - r
    } else {
        r
    }
}

/// Univariate image of `poly` in `x` with all other variables specialized
/// modulo the probe prime. None when a coefficient denominator vanishes.
fn eval_mod(poly: &Poly, x: Var, assign: &BTreeMap<Var, u64>, p: u64) -> Option<Vec<u64>> {
    let deg = poly.degree_in(x) as usize;
    let mut out = vec![0u64; deg + 1];
    for (mon, c) in &poly.terms {
        let dq = bigint_mod(c.denom(), p);
        if dq == 0 {
            return None;
        }
        let mut val = mul_mod(bigint_mod(c.numer(), p), inv_mod(dq, p), p);
        let mut ex = 0usize;
        for &(v, e) in &mon.0 {
            if v == x {
                ex = e as usize;
            } else {
                val = mul_mod(val, pow_mod(assign[&v], e as u64, p), p);
            }
        }
        out[ex] = (out[ex] + val) % p;
    }
    Some(out)
}

fn uni_deg_mod(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Degree of gcd of two univariate polynomials over the probe field.
fn uni_gcd_deg_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> usize {
    let (mut f, mut g) = (a, b);
    loop {
        let dg = match uni_deg_mod(&g) {
            None => return uni_deg_mod(&f).unwrap_or(0),
            Some(d) => d,
        };
        if dg == 0 {
            return 0;
        }
        let df = match uni_deg_mod(&f) {
            None => return dg,
            Some(d) => d,
        };
        if df < dg {
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        // f <- f mod g
        let lginv = inv_mod(g[dg], p);
        for top in (dg..=df).rev() {
            let c = f[top];
            if c == 0 {
                continue;
            }
            let factor = mul_mod(c, lginv, p);
            for (i, &gc) in g.iter().enumerate().take(dg + 1) {
                let idx = top - dg + i;
                let sub = mul_mod(factor, gc, p);
                f[idx] = (f[idx] + p - sub) % p;
            }
        }
        f.truncate(dg);
        std::mem::swap(&mut f, &mut g);
    }
}

/// Probe the degree of gcd(a, b) in `x`. `Some(0)` is a proof that the gcd is
/// free of `x`; positive values are heuristic estimates. None when no valid
/// specialization was found.
fn probe_degree(a: &Poly, b: &Poly, x: Var, seed: &mut u64) -> Option<usize> {
    let p = PROBE_PRIME;
    let mut vars: Vec<Var> = a.vars();
    vars.extend(b.vars());
    vars.sort();
    vars.dedup();
    for _ in 0..4 {
        let mut assign = BTreeMap::new();
        for &v in &vars {
            if v != x {
                assign.insert(v, 1 + splitmix(seed) % (p - 1));
            }
        }
        let (Some(ua), Some(ub)) = (eval_mod(a, x, &assign, p), eval_mod(b, x, &assign, p)) else {
            continue;
        };
        // the specialization must preserve both leading coefficients,
        // otherwise the gcd image may lose degree
        if uni_deg_mod(&ua) != Some(a.degree_in(x) as usize)
            || uni_deg_mod(&ub) != Some(b.degree_in(x) as usize)
        {
            continue;
        }
        return Some(uni_gcd_deg_mod(ua, ub, p));
    }
    None
}

/// Univariate view of a polynomial in a chosen main variable: coefficient
/// polynomials indexed by degree.
fn to_uni(p: &Poly, x: Var) -> Vec<Poly> {
    let deg = p.degree_in(x) as usize;
    let mut coeffs = vec![Poly::zero(); deg + 1];
    for (m, c) in &p.terms {
        let e = m.exponent(x) as usize;
        let rest = m.div(&Monomial::var(x).pow(e as u32)).unwrap();
        coeffs[e].add_term(rest, c.clone());
    }
    coeffs
}

fn from_uni(coeffs: &[Poly], x: Var) -> Poly {
    let mut out = Poly::zero();
    for (e, c) in coeffs.iter().enumerate() {
        let xe = Monomial::var(x).pow(e as u32);
        for (m, a) in &c.terms {
            out.add_term(m.mul(&xe), a.clone());
        }
    }
    out
}

fn uni_deg(p: &[Poly]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn uni_trim(p: &mut Vec<Poly>) {
    while matches!(p.last(), Some(c) if c.is_zero()) {
        p.pop();
    }
}

fn uni_scale(p: &[Poly], c: &Poly) -> Vec<Poly> {
    p.iter().map(|a| a * c).collect()
}

fn uni_exact_div_coeffs(p: &[Poly], c: &Poly) -> Vec<Poly> {
    p.iter()
        .map(|a| a.exact_div(c).expect("content division must be exact"))
        .collect()
}

/// Pseudo-remainder of `a` by `b` in the main variable (`b` nonzero), up to a
/// power of `lc(b)`; callers strip content afterwards, so the exact multiplier
/// is irrelevant.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = uni_deg(b).expect("prem by zero");
    if uni_deg(a).is_none() {
        return Vec::new();
    }
    let lb = b[db].clone();
    let mut r: Vec<Poly> = a.to_vec();
    loop {
        uni_trim(&mut r);
        let dr = match uni_deg(&r) {
            None => break,
            Some(d) => d,
        };
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        // r <- lb*r - lr * x^(dr-db) * b
        r = uni_scale(&r, &lb);
        for (i, bc) in b.iter().enumerate() {
            let idx = i + dr - db;
            r[idx] = &r[idx] - &(&lr * bc);
        }
    }
    r
}

/// Content of a univariate-view polynomial: gcd of its coefficients, folded
/// smallest-first so the accumulator shrinks as early as possible.
fn content(p: &[Poly]) -> Poly {
    let mut nonzero: Vec<&Poly> = p.iter().filter(|c| !c.is_zero()).collect();
    nonzero.sort_by_key(|c| c.num_terms());
    let mut acc = Poly::zero();
    for c in nonzero {
        acc = gcd(&acc, c);
        if let Some(v) = acc.constant_value() {
            if v == q(1) {
                return acc;
            }
        }
    }
    if acc.is_zero() {
        Poly::one()
    } else {
        acc
    }
}

// ---------------------------------------------------------------------------
// Heuristic gcd by integer evaluation
//
// Evaluating every variable at a sufficiently large integer xi maps the gcd to
// a divisor of the integer gcd of the images, and any polynomial with
// coefficients smaller than xi/2 can be read back off from its value via
// balanced xi-adic digits. A candidate reconstructed this way is certified by
// exact trial division, so a successful return is always correct; failures
// fall back to the pseudo-remainder sequence. This avoids the intermediate
// coefficient blowup that makes the PRS slow on dense operands.
// ---------------------------------------------------------------------------

/// Clear coefficient denominators; changes the gcd only by a constant factor.
fn integer_scaled(p: &Poly) -> Poly {
    let mut l = BigInt::one();
    for c in p.terms.values() {
        l = l.lcm(c.denom());
    }
    if l.is_one() {
        p.clone()
    } else {
        p.scale(&Scalar::from(l))
    }
}

fn max_abs_num(p: &Poly) -> BigInt {
    p.terms
        .values()
        .map(|c| c.numer().abs())
        .max()
        .unwrap_or_default()
}

/// Substitute the integer xi for x by Horner evaluation over the grouped
/// coefficients.
fn eval_var_int(p: &Poly, x: Var, xi: &BigInt) -> Poly {
    let mut by_pow: BTreeMap<u32, Poly> = BTreeMap::new();
    for (m, c) in &p.terms {
        let e = m.exponent(x);
        let rest = m
            .div(&Monomial::var(x).pow(e))
            .expect("monomial division by own power");
        by_pow
            .entry(e)
            .or_insert_with(Poly::zero)
            .add_term(rest, c.clone());
    }
    let mut acc = Poly::zero();
    let mut prev = 0u32;
    for (&e, coeff) in by_pow.iter().rev() {
        if acc.is_zero() {
            acc = coeff.clone();
        } else {
            acc = &acc.scale(&Scalar::from(xi.pow(prev - e))) + coeff;
        }
        prev = e;
    }
    if prev > 0 {
        acc = acc.scale(&Scalar::from(xi.pow(prev)));
    }
    acc
}

/// Balanced remainder in (-xi/2, xi/2].
fn smod(c: &BigInt, xi: &BigInt) -> BigInt {
    let r = c.mod_floor(xi);
    if &r * 2 > *xi {
        r - xi
    } else {
        r
    }
}

/// Divide out the integer content, keeping the coefficients integral.
fn int_primitive(p: &Poly) -> Poly {
    let mut g = BigInt::zero();
    for c in p.terms.values() {
        g = g.gcd(c.numer());
        if g.is_one() {
            return p.clone();
        }
    }
    if g.is_zero() {
        return p.clone();
    }
    p.scale(&Scalar::from(g).recip())
}

/// Read the candidate gcd back off its integer image by balanced xi-adic
/// digits; the digit index is the exponent of x. Fails if the digit count
/// exceeds the degree bound, which means xi was too small.
fn xi_adic_reconstruct(gamma: &Poly, x: Var, xi: &BigInt, max_digits: u32) -> Option<Poly> {
    let mut g = gamma.clone();
    let mut out = Poly::zero();
    let mut i = 0u32;
    while !g.is_zero() {
        if i >= max_digits {
            return None;
        }
        let mut digit = Poly::zero();
        let mut next = Poly::zero();
        for (m, c) in &g.terms {
            let d = smod(c.numer(), xi);
            let quot = (c.numer() - &d) / xi;
            if !d.is_zero() {
                digit.add_term(m.clone(), Scalar::from(d));
            }
            if !quot.is_zero() {
                next.add_term(m.clone(), Scalar::from(quot));
            }
        }
        if !digit.is_zero() {
            out = &out + &digit.mul_monomial(&Monomial::var(x).pow(i), &q(1));
        }
        g = next;
        i += 1;
    }
    Some(out)
}

/// Bits of the integers the recursive evaluation bottoms out at; used to skip
/// the heuristic when it would be more expensive than the PRS.
fn heuristic_cost_bits(a: &Poly, b: &Poly, vars: &[Var]) -> u64 {
    let coeff_bits = max_abs_num(a).bits().max(max_abs_num(b).bits()) + 8;
    vars.iter().fold(coeff_bits, |acc, &v| {
        let d = a.degree_in(v).min(b.degree_in(v)) as u64 + 1;
        acc.saturating_mul(d.max(1))
    })
}

const HEU_MAX_BITS: u64 = 1_000_000;
const HEU_TRIES: usize = 6;

/// Heuristic gcd of integer-coefficient polynomials. A `Some` result is exact
/// (certified by trial division at every level); `None` means the heuristic
/// gave up and the caller should use the PRS.
fn heugcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let mut vars = a.vars();
    for v in b.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort();
    if heuristic_cost_bits(a, b, &vars) > HEU_MAX_BITS {
        return None;
    }
    heugcd_rec(a, b, &vars).map(|g| int_primitive(&g))
}

fn heugcd_rec(a: &Poly, b: &Poly, vars: &[Var]) -> Option<Poly> {
    let Some((&x, rest)) = vars.split_last() else {
        let ga = a.constant_value().expect("no variables left");
        let gb = b.constant_value().expect("no variables left");
        return Some(Poly::constant(Scalar::from(ga.numer().gcd(gb.numer()))));
    };
    let max_digits = a.degree_in(x).min(b.degree_in(x)) + 1;
    let mut xi: BigInt = BigInt::from(2) * max_abs_num(a).min(max_abs_num(b)) + 29;
    for _ in 0..HEU_TRIES {
        let ea = eval_var_int(a, x, &xi);
        let eb = eval_var_int(b, x, &xi);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(gamma) = heugcd_rec(&ea, &eb, rest) {
                // Keep the integer content of the candidate: it is the
                // evaluated image of the gcd's dependence on the variables
                // still to be reconstructed above this level. Only the
                // top-level caller strips it.
                if let Some(cand) = xi_adic_reconstruct(&gamma, x, &xi, max_digits) {
                    // try the cheaper division first so bad candidates are
                    // rejected before touching the big operand
                    let (small, big) = if a.num_terms() <= b.num_terms() {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    if small.exact_div(&cand).is_some() && big.exact_div(&cand).is_some() {
                        return Some(cand);
                    }
                }
            }
        }
        xi = &xi * 73794 / 27011 + 37;
    }
    None
}

/// Canonical (monic) greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    // Peel off the common monomial factor first; it is cheap and frequent.
    let ma = a.content_monomial();
    let mb = b.content_monomial();
    let mg = ma.gcd(&mb);
    let ar = a.div_monomial(&ma);
    let br = b.div_monomial(&mb);
    let core = gcd_primitive(&ar, &br);
    core.mul_monomial(&mg, &q(1)).monic()
}

fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    static TRACE: std::sync::OnceLock<bool> = std::sync::OnceLock::new();
    if *TRACE.get_or_init(|| std::env::var("WDVV_GCD_TRACE").is_ok()) {
        let t = std::time::Instant::now();
        let out = gcd_primitive_inner(a, b);
        let el = t.elapsed();
        if el.as_millis() >= 200 {
            eprintln!(
                "slow gcd ({el:?}):\nA = {}\nB = {}\nG = {}",
                crate::exact::parse::print(&crate::exact::Rx::from_poly(a.clone())),
                crate::exact::parse::print(&crate::exact::Rx::from_poly(b.clone())),
                crate::exact::parse::print(&crate::exact::Rx::from_poly(out.clone())),
            );
        }
        return out;
    }
    gcd_primitive_inner(a, b)
}

fn gcd_primitive_inner(a: &Poly, b: &Poly) -> Poly {
    if a == b {
        return a.monic();
    }
    // Cheap trial divisions catch the very common "one divides the other" case.
    if a.total_degree() >= b.total_degree() {
        if a.exact_div(b).is_some() {
            return b.monic();
        }
    } else if b.exact_div(a).is_some() {
        return a.monic();
    }
    // Probe the gcd degree in every shared variable. A zero probe proves the
    // gcd is free of that variable; if that holds for all of them, the gcd is
    // constant. Otherwise pick the variable with the smallest estimated
    // degree as the main variable of the pseudo-remainder sequence.
    let shared: Vec<Var> = a
        .vars()
        .into_iter()
        .filter(|v| b.contains_var(*v))
        .collect();
    let mut seed = 0x5851_f42d_4c95_7f2du64;
    let mut involved: Vec<Var> = Vec::new();
    let mut proven_constant = true;
    for &v in &shared {
        match probe_degree(a, b, v, &mut seed) {
            Some(0) => {}
            _ => {
                proven_constant = false;
                involved.push(v);
            }
        }
    }
    if proven_constant {
        return Poly::one();
    }
    // Certified heuristic first; it sidesteps the PRS's coefficient blowup on
    // dense operands and falls through on failure.
    if let Some(g) = heugcd(&integer_scaled(a), &integer_scaled(b)) {
        return g.monic();
    }
    // Variables proven absent from the gcd cannot serve as the main variable
    // of the pseudo-remainder sequence (the gcd would sit entirely in the
    // content); among the rest pick the variable in which the operands have
    // the smallest degree, which keeps the remainder sequence short.
    let x = *involved
        .iter()
        .min_by_key(|&&v| {
            let (da, db) = (a.degree_in(v), b.degree_in(v));
            (da.min(db), da.max(db))
        })
        .expect("nonconstant gcd needs a shared variable");
    let (da, db) = (a.degree_in(x), b.degree_in(x));
    if da == 0 {
        // a is free of the main variable: gcd(a, content_x(b))
        return gcd(a, &content(&to_uni(b, x)));
    }
    if db == 0 {
        return gcd(b, &content(&to_uni(a, x)));
    }
    let ua = to_uni(a, x);
    let ub = to_uni(b, x);
    let ca = content(&ua);
    let cb = content(&ub);
    let cg = gcd(&ca, &cb);
    let pa = uni_exact_div_coeffs(&ua, &ca);
    let pb = uni_exact_div_coeffs(&ub, &cb);
    let pp = primitive_prs_gcd(pa, pb, x);
    (&pp * &cg).monic()
}

/// Primitive pseudo-remainder sequence on primitive univariate-view operands:
/// each remainder is stripped of its content before the next step, which keeps
/// the coefficient polynomials minimal throughout.
fn primitive_prs_gcd(mut f: Vec<Poly>, mut g: Vec<Poly>, x: Var) -> Poly {
    uni_trim(&mut f);
    uni_trim(&mut g);
    if uni_deg(&f) < uni_deg(&g) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let dg = match uni_deg(&g) {
            None => {
                let c = content(&f);
                return from_uni(&uni_exact_div_coeffs(&f, &c), x);
            }
            Some(d) => d,
        };
        if dg == 0 {
            return Poly::one();
        }
        let mut r = prem(&f, &g);
        uni_trim(&mut r);
        if !r.is_empty() {
            let c = content(&r);
            r = uni_exact_div_coeffs(&r, &c);
        }
        f = g;
        g = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::vars::Family;

    fn v(i: u16) -> Poly {
        Poly::var(Var::jet(Family::A, i, 0))
    }

    #[test]
    fn gcd_of_products() {
        let p = &(&v(1) + &v(2)) * &(&v(1) - &v(2));
        let d = &(&v(1) - &v(2)) * &(&v(2) + &Poly::one());
        let g = gcd(&p, &d);
        assert_eq!(g, (&v(1) - &v(2)).monic());
    }

    #[test]
    fn gcd_coprime() {
        let g = gcd(&(&v(1) + &Poly::one()), &(&v(2) + &Poly::one()));
        assert_eq!(g, Poly::one());
    }

    #[test]
    fn gcd_with_powers() {
        let f = &v(1).pow(3) * &v(2).pow(2);
        let g = &v(1).pow(2) * &(&v(2) * &v(3));
        let r = gcd(&f, &g);
        assert_eq!(r, &v(1).pow(2) * &v(2));
    }

    #[test]
    fn gcd_multivariate_dense() {
        // (x+y+1)^2 (x-y) vs (x+y+1)(x+2)
        let common = &(&v(1) + &v(2)) + &Poly::one();
        let p = &common.pow(2) * &(&v(1) - &v(2));
        let r = &common * &(&v(1) + &Poly::constant(q(2)));
        assert_eq!(gcd(&p, &r), common.monic());
    }
}

//! Multivariate division and Buchberger's algorithm over ℚ.
//!
//! Internally polynomials are term vectors sorted by decreasing monomial
//! order, which makes leading-term access and cancellation cheap.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::order::MonomialOrder;
use super::GroebnerError;
use crate::polyring::{Monomial, Polynomial, Rational, Vars};

type Terms = Vec<(Monomial, Rational)>;
/// Integer form used inside the completion loop: primitive, positive
/// leading coefficient.
type ITerms = Vec<(Monomial, BigInt)>;

/// A reduced Gröbner basis: monic generators, none of whose leading
/// monomials divides another's, sorted by decreasing leading monomial.
/// An empty generator list stands for the zero ideal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    vars: Vars,
    generators: Vec<Polynomial>,
    order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.len() == 1
            && self.generators[0]
                .as_constant()
                .is_some_and(|c| !c.is_zero())
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let basis: Vec<Terms> = self
            .generators
            .iter()
            .map(|g| sorted(g, &self.order))
            .collect();
        let r = reduce_terms(sorted(p, &self.order), &basis, &self.order);
        Polynomial::from_terms(p.vars(), r)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn leading_monomial(&self, p: &Polynomial) -> Option<Monomial> {
        leading(p, &self.order).map(|(m, _)| m)
    }

    /// Checks the defining properties against the generators it was built
    /// from: every input reduces to zero, every S-polynomial reduces to zero,
    /// and the basis is reduced and monic.
    pub fn verify(&self, inputs: &[Polynomial]) -> Result<(), String> {
        for (i, p) in inputs.iter().enumerate() {
            let r = self.reduce(p);
            if !r.is_zero() {
                return Err(format!("input {i} ({p}) has nonzero normal form {r}"));
            }
        }
        let basis: Vec<Terms> = self
            .generators
            .iter()
            .map(|g| sorted(g, &self.order))
            .collect();
        for (i, g) in basis.iter().enumerate() {
            if !g[0].1.is_one() {
                return Err(format!("generator {i} is not monic"));
            }
            for (j, h) in basis.iter().enumerate() {
                if i != j && h[0].0.divides(&g[0].0) {
                    return Err(format!(
                        "leading monomial of generator {j} divides generator {i}"
                    ));
                }
            }
        }
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let s = s_polynomial(&basis[i], &basis[j], &self.order);
                if !reduce_terms(s, &basis, &self.order).is_empty() {
                    return Err(format!(
                        "S-polynomial of generators {i},{j} does not reduce to zero"
                    ));
                }
            }
        }
        Ok(())
    }
}

fn sorted(p: &Polynomial, order: &MonomialOrder) -> Terms {
    let mut t: Terms = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    t
}

fn leading(p: &Polynomial, order: &MonomialOrder) -> Option<(Monomial, Rational)> {
    p.terms()
        .max_by(|a, b| order.cmp(a.0, b.0))
        .map(|(m, c)| (m.clone(), c.clone()))
}

/// `a − c·m·b`, both sorted descending.
fn sub_scaled(
    a: &[(Monomial, Rational)],
    c: &Rational,
    m: &Monomial,
    b: &Terms,
    order: &MonomialOrder,
) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(bm, bc)| (bm.mul(m), bc * c)).peekable();
    while i < a.len() {
        match bi.peek() {
            None => break,
            Some((bm, _)) => match order.cmp(&a[i].0, bm) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (bm, bc) = bi.next().unwrap();
                    out.push((bm, -bc));
                }
                Ordering::Equal => {
                    let (_, bc) = bi.next().unwrap();
                    let v = &a[i].1 - bc;
                    if !v.is_zero() {
                        out.push((a[i].0.clone(), v));
                    }
                    i += 1;
                }
            },
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(bi.map(|(bm, bc)| (bm, -bc)));
    out
}

fn reduce_terms(p: Terms, basis: &[Terms], order: &MonomialOrder) -> Terms {
    let mut rem: Terms = Vec::new();
    let mut p = p;
    let mut start = 0;
    while start < p.len() {
        let (lm, lc) = (&p[start].0, &p[start].1);
        let divisor = basis.iter().find(|g| !g.is_empty() && g[0].0.divides(lm));
        match divisor {
            Some(g) => {
                let q = g[0].0.quotient_of(lm).unwrap();
                let c = lc / &g[0].1;
                p = sub_scaled(&p[start..], &c, &q, g, order);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    rem
}

fn s_polynomial(f: &Terms, g: &Terms, order: &MonomialOrder) -> Terms {
    let l = f[0].0.lcm(&g[0].0);
    let mf = f[0].0.quotient_of(&l).unwrap();
    let mg = g[0].0.quotient_of(&l).unwrap();
    let cf = Rational::one() / &f[0].1;
    let cg = &cf * &f[0].1 / &g[0].1;
    let scaled_f: Terms = f.iter().map(|(m, c)| (m.mul(&mf), c * &cf)).collect();
    sub_scaled(&scaled_f, &cg, &mg, g, order)
}

fn make_monic(mut t: Terms) -> Terms {
    if let Some(lc) = t.first().map(|x| x.1.clone()) {
        if !lc.is_one() {
            for term in &mut t {
                term.1 /= &lc;
            }
        }
    }
    t
}

fn to_int(t: &Terms) -> ITerms {
    let den = t
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut out: ITerms = t
        .iter()
        .map(|(m, c)| (m.clone(), c.numer() * (&den / c.denom())))
        .collect();
    make_primitive(&mut out, &mut []);
    out
}

fn int_to_monic(t: &ITerms) -> Terms {
    let lc = Rational::from_integer(t[0].1.clone());
    t.iter()
        .map(|(m, c)| (m.clone(), Rational::from_integer(c.clone()) / &lc))
        .collect()
}

/// Divides `p` and `extra` by the gcd of all their coefficients and makes
/// the leading coefficient of `p` (or of `extra` if `p` is empty) positive.
fn make_primitive(p: &mut [(Monomial, BigInt)], extra: &mut [(Monomial, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, c) in p.iter().chain(extra.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    let lead = p
        .first()
        .or(extra.first())
        .map(|t| t.1.is_negative())
        .unwrap_or(false);
    if g.is_zero() {
        return;
    }
    if lead {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in p.iter_mut().chain(extra.iter_mut()) {
            *c /= &g;
        }
    }
}

/// `ca·a − cb·m·b`, both sorted descending.
fn isub(
    a: &[(Monomial, BigInt)],
    ca: &BigInt,
    cb: &BigInt,
    m: &Monomial,
    b: &ITerms,
    order: &MonomialOrder,
) -> ITerms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let scale_a = !ca.is_one();
    let mut i = 0;
    let mut bi = b.iter().map(|(bm, bc)| (bm.mul(m), bc * cb)).peekable();
    while i < a.len() {
        let Some((bm, _)) = bi.peek() else { break };
        match order.cmp(&a[i].0, bm) {
            Ordering::Greater => {
                out.push((
                    a[i].0.clone(),
                    if scale_a {
                        &a[i].1 * ca
                    } else {
                        a[i].1.clone()
                    },
                ));
                i += 1;
            }
            Ordering::Less => {
                let (bm, bc) = bi.next().unwrap();
                out.push((bm, -bc));
            }
            Ordering::Equal => {
                let (_, bc) = bi.next().unwrap();
                let v = if scale_a {
                    &a[i].1 * ca
                } else {
                    a[i].1.clone()
                } - bc;
                if !v.is_zero() {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
            }
        }
    }
    out.extend(
        a[i..]
            .iter()
            .map(|(m, c)| (m.clone(), if scale_a { c * ca } else { c.clone() })),
    );
    out.extend(bi.map(|(bm, bc)| (bm, -bc)));
    out
}

/// Fraction-free full reduction; the result is primitive (a nonzero
/// rational multiple of the true remainder).
fn ireduce(p: ITerms, basis: &[ITerms], order: &MonomialOrder) -> ITerms {
    let mut rem: ITerms = Vec::new();
    let mut p = p;
    let mut start = 0;
    let mut steps = 0usize;
    while start < p.len() {
        let lm = &p[start].0;
        match basis.iter().find(|g| g[0].0.divides(lm)) {
            Some(g) => {
                let q = g[0].0.quotient_of(lm).unwrap();
                let (a, b) = (&p[start].1, &g[0].1);
                let d = a.gcd(b);
                let (ca, cb) = (b / &d, a / &d);
                p = isub(&p[start..], &ca, &cb, &q, g, order);
                start = 0;
                if !ca.is_one() {
                    for r in &mut rem {
                        r.1 *= &ca;
                    }
                }
                steps += 1;
                if steps % 8 == 0 {
                    make_primitive(&mut rem, &mut p);
                }
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    make_primitive(&mut rem, &mut []);
    rem
}

fn is_s_polynomial(f: &ITerms, g: &ITerms, order: &MonomialOrder) -> ITerms {
    let l = f[0].0.lcm(&g[0].0);
    let mf = f[0].0.quotient_of(&l).unwrap();
    let mg = g[0].0.quotient_of(&l).unwrap();
    let (a, b) = (&f[0].1, &g[0].1);
    let d = a.gcd(b);
    let (cf, cg) = (b / &d, a / &d);
    let shifted: ITerms = f.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    isub(&shifted, &cf, &cg, &mg, g, order)
}

/// Remainder of `p` on division by `basis` (full reduction, deterministic).
pub fn normal_form(
    p: &Polynomial,
    basis: &[Polynomial],
    order: &MonomialOrder,
) -> Result<Polynomial, GroebnerError> {
    if basis.iter().any(Polynomial::is_zero) {
        return Err(GroebnerError::ZeroInBasis);
    }
    let b: Vec<Terms> = basis.iter().map(|g| sorted(g, order)).collect();
    Ok(Polynomial::from_terms(
        p.vars(),
        reduce_terms(sorted(p, order), &b, order),
    ))
}

/// Reduced Gröbner basis of `⟨gens⟩`. Zero generators are ignored.
pub fn buchberger(
    gens: &[Polynomial],
    order: &MonomialOrder,
) -> Result<GroebnerBasis, GroebnerError> {
    buchberger_extend(&[], gens, order)
}

/// Gröbner basis of `⟨known ∪ extra⟩`, where `known` is already a Gröbner
/// basis, so pairs inside it are skipped.
pub fn buchberger_extend(
    known: &[Polynomial],
    extra: &[Polynomial],
    order: &MonomialOrder,
) -> Result<GroebnerBasis, GroebnerError> {
    let vars = match known.iter().chain(extra).next() {
        Some(p) => p.vars().clone(),
        None => return Err(GroebnerError::EmptyInput),
    };
    for p in known.iter().chain(extra) {
        if p.vars() != &vars {
            return Err(GroebnerError::Poly(
                crate::polyring::PolyError::ContextMismatch {
                    left: vars.names().to_vec(),
                    right: p.vars().names().to_vec(),
                },
            ));
        }
    }

    let mut basis: Vec<ITerms> = known
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| to_int(&sorted(p, order)))
        .collect();
    let mut sugar: Vec<u32> = basis.iter().map(|g| total_degree(g)).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    let unit = |vars: &Vars| GroebnerBasis {
        generators: vec![Polynomial::one(vars)],
        order: order.clone(),
        vars: vars.clone(),
    };
    if basis.iter().any(|g| g[0].0.is_one()) {
        return Ok(unit(&vars));
    }

    // Reduce each incoming generator by what is already there.
    for p in extra.iter().filter(|p| !p.is_zero()) {
        let t = to_int(&sorted(p, order));
        let deg = total_degree(&t);
        let r = ireduce(t, &basis, order);
        if !r.is_empty() {
            if r[0].0.is_one() {
                return Ok(unit(&vars));
            }
            add_generator(&mut basis, &mut sugar, &mut pairs, r, deg);
        }
    }

    while !pairs.is_empty() {
        let idx = select_pair(&pairs, &basis, &sugar, order);
        let (i, j) = pairs.swap_remove(idx);
        let (li, lj) = (&basis[i][0].0, &basis[j][0].0);
        if li.coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        if chain_criterion(i, j, &l, &basis, &pairs) {
            continue;
        }
        let s_sugar = pair_sugar(i, j, &basis, &sugar);
        let s = is_s_polynomial(&basis[i], &basis[j], order);
        let r = ireduce(s, &basis, order);
        if !r.is_empty() {
            if r[0].0.is_one() {
                return Ok(unit(&vars));
            }
            add_generator(&mut basis, &mut sugar, &mut pairs, r, s_sugar);
        }
    }

    let reduced = interreduce(basis.iter().map(int_to_monic).collect(), order);
    Ok(GroebnerBasis {
        generators: reduced
            .into_iter()
            .map(|t| Polynomial::from_terms(&vars, t))
            .collect(),
        order: order.clone(),
        vars,
    })
}

fn total_degree<C>(t: &[(Monomial, C)]) -> u32 {
    t.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
}

fn add_generator(
    basis: &mut Vec<ITerms>,
    sugar: &mut Vec<u32>,
    pairs: &mut Vec<(usize, usize)>,
    g: ITerms,
    s: u32,
) {
    let k = basis.len();
    sugar.push(s.max(total_degree(&g)));
    basis.push(g);
    for i in 0..k {
        // Generators whose leading monomial the new one divides are kept but
        // their pairs still go through the criteria.
        pairs.push((i, k));
    }
}

fn pair_sugar(i: usize, j: usize, basis: &[ITerms], sugar: &[u32]) -> u32 {
    let l = basis[i][0].0.lcm(&basis[j][0].0).degree();
    (sugar[i] + l - basis[i][0].0.degree()).max(sugar[j] + l - basis[j][0].0.degree())
}

/// Sugar strategy: lowest sugar degree first, then smallest lcm, then index.
fn select_pair(
    pairs: &[(usize, usize)],
    basis: &[ITerms],
    sugar: &[u32],
    order: &MonomialOrder,
) -> usize {
    let key = |&(i, j): &(usize, usize)| {
        (
            pair_sugar(i, j, basis, sugar),
            basis[i][0].0.lcm(&basis[j][0].0),
        )
    };
    let mut best = 0;
    let (mut best_s, mut best_lcm) = key(&pairs[0]);
    for (k, p) in pairs.iter().enumerate().skip(1) {
        let (s, l) = key(p);
        let better = match s.cmp(&best_s) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => match order.cmp(&l, &best_lcm) {
                Ordering::Less => true,
                Ordering::Equal => *p < pairs[best],
                Ordering::Greater => false,
            },
        };
        if better {
            best = k;
            best_s = s;
            best_lcm = l;
        }
    }
    best
}

/// Skip `(i, j)` when some other generator's leading monomial divides the
/// lcm and both of its pairs with `i` and `j` have already been handled.
fn chain_criterion(
    i: usize,
    j: usize,
    l: &Monomial,
    basis: &[ITerms],
    pending: &[(usize, usize)],
) -> bool {
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    (0..basis.len()).any(|k| {
        k != i
            && k != j
            && basis[k][0].0.divides(l)
            && !pending.contains(&key(i, k))
            && !pending.contains(&key(j, k))
    })
}

fn interreduce(basis: Vec<Terms>, order: &MonomialOrder) -> Vec<Terms> {
    // Minimal basis: drop generators whose leading monomial is divisible by
    // another's (keeping the earliest among equal leading monomials).
    let mut minimal: Vec<Terms> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis
            .iter()
            .enumerate()
            .any(|(j, h)| j != i && h[0].0.divides(&g[0].0) && (h[0].0 != g[0].0 || j < i));
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Terms> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        // Leading term survives: no other leading monomial divides it.
        let head = minimal[i][0].clone();
        let tail = reduce_terms(minimal[i][1..].to_vec(), &others, order);
        let mut g = vec![head];
        g.extend(tail);
        out.push(make_monic(g));
    }
    out.sort_by(|a, b| order.cmp(&b[0].0, &a[0].0));
    out
}

/// `p ∈ ⟨gens⟩`.
pub fn ideal_member(
    p: &Polynomial,
    gens: &[Polynomial],
    order: &MonomialOrder,
) -> Result<bool, GroebnerError> {
    if p.is_zero() {
        return Ok(true);
    }
    if gens.iter().all(Polynomial::is_zero) {
        return Ok(false);
    }
    let gb = buchberger(gens, order)?;
    Ok(gb.contains(p))
}

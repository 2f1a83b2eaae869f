use super::{AlgebraKind, AlgebraSpec};
use crate::bvcalc::{Functional, TermKey};
use crate::superlinear::{fmt_q, q, Matrix, Parity, SparseTensor, Q};
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Basis names (or monomials) exhibiting the failure; empty on success.
    pub witness: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn pass(&mut self, name: &str) {
        self.checks.push(Check {
            name: name.into(),
            passed: true,
            witness: Vec::new(),
            detail: String::new(),
        });
    }

    fn fail(&mut self, name: &str, witness: Vec<String>, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            passed: false,
            witness,
            detail,
        });
    }

    fn record(&mut self, name: &str, failure: Option<(Vec<String>, String)>) {
        match failure {
            None => self.pass(name),
            Some((w, d)) => self.fail(name, w, d),
        }
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed {
                writeln!(f, "PASS {}", c.name)?;
            } else {
                writeln!(
                    f,
                    "FAIL {} witness=({}) {}",
                    c.name,
                    c.witness.join(","),
                    c.detail
                )?;
            }
        }
        Ok(())
    }
}

type Failure = Option<(Vec<String>, String)>;

fn names(spec: &AlgebraSpec, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| spec.basis.name(i).to_string()).collect()
}

fn monomial_witness(spec: &AlgebraSpec, f: &Functional) -> Failure {
    let (k, v): (&TermKey, &Q) = f.terms().next()?;
    let w = k
        .monomial
        .cycles()
        .iter()
        .map(|c| {
            let ls: Vec<&str> = c.letters().iter().map(|&l| spec.basis.name(l as usize)).collect();
            format!("({})", ls.join(" "))
        })
        .collect();
    Some((w, format!("coefficient {} (hbar^{})", fmt_q(v), k.hbar)))
}

fn check_operator_odd(spec: &AlgebraSpec, op: &Matrix) -> Failure {
    let par = spec.basis.parities();
    for j in 0..op.rows() {
        for i in 0..op.cols() {
            if !op[(j, i)].is_zero() && par[i] == par[j] {
                return Some((
                    names(spec, &[i, j]),
                    format!("maps {} to {} parity", par[i], par[j]),
                ));
            }
        }
    }
    None
}

fn check_product_parities(spec: &AlgebraSpec) -> Failure {
    let par = spec.basis.parities();
    for (&n, t) in &spec.raw_products {
        for (idx, _) in t.entries() {
            let (inputs, out) = idx.split_at(n);
            let expect = Parity::sum(inputs.iter().map(|&i| par[i])) + Parity::from_bool(n % 2 == 1);
            if par[out[0]] != expect {
                return Some((
                    names(spec, idx),
                    format!("raw product of arity {n} has the wrong parity"),
                ));
            }
        }
    }
    let lpar = spec.letter_parities();
    for (&n, t) in &spec.cyclic_products {
        for (idx, _) in t.entries() {
            if Parity::sum(idx.iter().map(|&i| lpar[i])).is_odd() {
                return Some((names(spec, idx), format!("cyclic product of arity {n} is odd")));
            }
        }
    }
    None
}

fn check_beta_parity(spec: &AlgebraSpec, beta: &Matrix) -> Failure {
    let par = spec.basis.parities();
    for i in 0..beta.rows() {
        for j in 0..beta.cols() {
            if !beta[(i, j)].is_zero() && par[i] == par[j] {
                return Some((names(spec, &[i, j]), "scalar product is not odd".into()));
            }
        }
    }
    None
}

fn check_beta_symmetric(spec: &AlgebraSpec, beta: &Matrix) -> Failure {
    for i in 0..beta.rows() {
        for j in 0..i {
            if beta[(i, j)] != beta[(j, i)] {
                return Some((names(spec, &[i, j]), "scalar product is not symmetric".into()));
            }
        }
    }
    None
}

fn check_nondegenerate(spec: &AlgebraSpec, beta: &Matrix) -> Failure {
    let ker = beta.kernel();
    let v = ker.first()?;
    let w = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| format!("{}*{}", fmt_q(x), spec.basis.name(i)))
        .collect();
    Some((w, "radical vector of the scalar product".into()))
}

fn check_cyclic(spec: &AlgebraSpec, n: usize, t: &SparseTensor) -> Failure {
    let lpar = spec.letter_parities();
    for (idx, v) in t.entries() {
        // m(x_0..x_n) = (-1)^{|x_n| (|x_0| + ... + |x_{n-1}|)} m(x_n, x_0, ..)
        let last = lpar[idx[n]].is_odd();
        let rest = Parity::sum(idx[..n].iter().map(|&i| lpar[i])).is_odd();
        let mut rot = vec![idx[n]];
        rot.extend_from_slice(&idx[..n]);
        let expect = if last && rest { -v.clone() } else { v.clone() };
        if t.get(&rot) != expect {
            return Some((names(spec, idx), format!("arity {n} product is not cyclic")));
        }
    }
    None
}

fn check_beta_invariance(spec: &AlgebraSpec, beta: &Matrix) -> Failure {
    let par = spec.basis.parities();
    let d = spec.dim();
    let i_op = &spec.i_op;
    for a in 0..d {
        for b in 0..d {
            let mut s = Q::zero();
            for k in 0..d {
                s += &i_op[(k, a)] * &beta[(k, b)];
                let t = &beta[(a, k)] * &i_op[(k, b)];
                if par[a].is_odd() {
                    s -= t;
                } else {
                    s += t;
                }
            }
            if !s.is_zero() {
                return Some((names(spec, &[a, b]), format!("defect {}", fmt_q(&s))));
            }
        }
    }
    None
}

/// Dense binary product table `table[a][b]` = coordinates of `a b`.
fn product_table(spec: &AlgebraSpec, m2: &SparseTensor) -> Vec<Vec<Vec<Q>>> {
    let d = spec.dim();
    let mut table = vec![vec![vec![Q::zero(); d]; d]; d];
    for (idx, v) in m2.entries() {
        table[idx[0]][idx[1]][idx[2]] += v;
    }
    table
}

fn mul_vec(table: &[Vec<Vec<Q>>], x: &[Q], y: &[Q]) -> Vec<Q> {
    let d = x.len();
    let mut out = vec![Q::zero(); d];
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        for (b, yb) in y.iter().enumerate() {
            if yb.is_zero() {
                continue;
            }
            for (k, c) in table[a][b].iter().enumerate() {
                if !c.is_zero() {
                    out[k] += xa * yb * c;
                }
            }
        }
    }
    out
}

fn unit(d: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); d];
    v[i] = q(1);
    v
}

fn check_associativity(spec: &AlgebraSpec, table: &[Vec<Vec<Q>>]) -> Failure {
    let d = spec.dim();
    for a in 0..d {
        for b in 0..d {
            let ab = &table[a][b];
            for c in 0..d {
                let left = mul_vec(table, ab, &unit(d, c));
                let right = mul_vec(table, &unit(d, a), &table[b][c]);
                if left != right {
                    return Some((names(spec, &[a, b, c]), "(ab)c != a(bc)".into()));
                }
            }
        }
    }
    None
}

fn check_leibniz(spec: &AlgebraSpec, table: &[Vec<Vec<Q>>]) -> Failure {
    let d = spec.dim();
    let par = spec.basis.parities();
    for a in 0..d {
        let ia = spec.i_op.column(a);
        for b in 0..d {
            let ib = spec.i_op.column(b);
            let lhs = spec.i_op.apply(&table[a][b]);
            let mut rhs = mul_vec(table, &ia, &unit(d, b));
            let second = mul_vec(table, &unit(d, a), &ib);
            for (r, s) in rhs.iter_mut().zip(second) {
                if par[a].is_odd() {
                    *r -= s;
                } else {
                    *r += s;
                }
            }
            if lhs != rhs {
                return Some((names(spec, &[a, b]), "I(ab) != I(a)b + (-1)^a aI(b)".into()));
            }
        }
    }
    None
}

/// `m(Jx,y,z) + (-1)^{|x|} m(x,Jy,z) + (-1)^{|x|+|y|} m(x,y,Jz) = 0` with
/// shifted parities.
fn check_leibniz_cyclic(spec: &AlgebraSpec, m: &SparseTensor) -> Failure {
    let d = spec.dim();
    let lpar = spec.letter_parities();
    let i_op = &spec.i_op;
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let mut s = Q::zero();
                let triple = [x, y, z];
                let mut before = false;
                for slot in 0..3 {
                    for k in 0..d {
                        let c = &i_op[(k, triple[slot])];
                        if c.is_zero() {
                            continue;
                        }
                        let mut t = triple.to_vec();
                        t[slot] = k;
                        let v = c * m.get(&t);
                        if before {
                            s -= v;
                        } else {
                            s += v;
                        }
                    }
                    before ^= lpar[triple[slot]].is_odd();
                }
                if !s.is_zero() {
                    return Some((names(spec, &triple), format!("defect {}", fmt_q(&s))));
                }
            }
        }
    }
    None
}

fn common_checks(spec: &AlgebraSpec, report: &mut ValidationReport) -> bool {
    report.record("product_parity", check_product_parities(spec));
    report.record("derivation_odd", check_operator_odd(spec, &spec.i_op));
    if let Some(h) = &spec.h_op {
        report.record("homotopy_odd", check_operator_odd(spec, h));
    }
    let Some(beta) = &spec.beta else {
        report.fail(
            "beta_present",
            vec!["beta".into()],
            "no scalar product given".into(),
        );
        return false;
    };
    report.record("beta_odd", check_beta_parity(spec, beta));
    report.record("beta_symmetric", check_beta_symmetric(spec, beta));
    let nondeg = check_nondegenerate(spec, beta);
    let ok = nondeg.is_none();
    report.record("beta_nondegenerate", nondeg);
    report.record("beta_invariance", check_beta_invariance(spec, beta));
    ok
}

fn check_kind(spec: &AlgebraSpec, want: AlgebraKind, report: &mut ValidationReport) {
    if spec.kind == want {
        report.pass("kind");
    } else {
        report.fail(
            "kind",
            vec![format!("{:?}", spec.kind)],
            format!("expected {want:?}"),
        );
    }
}

pub fn validate_cyclic_dga(spec: &AlgebraSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    check_kind(spec, AlgebraKind::Associative, &mut report);
    let higher: Vec<usize> = spec
        .raw_products
        .keys()
        .chain(spec.cyclic_products.keys())
        .copied()
        .filter(|&n| n != 2)
        .collect();
    report.record(
        "binary_only",
        higher.first().map(|n| {
            (
                vec![format!("arity {n}")],
                "associative algebras carry only m_2".into(),
            )
        }),
    );
    let beta_ok = common_checks(spec, &mut report);
    if !beta_ok {
        return report;
    }
    let (raw, cyc) = match (spec.raw_forms(), spec.cyclic_forms()) {
        (Ok(r), Ok(c)) => (r, c),
        (Err(e), _) | (_, Err(e)) => {
            report.fail("products", vec![], e.to_string());
            return report;
        }
    };
    let m2_raw = raw
        .get(&2)
        .cloned()
        .unwrap_or_else(|| SparseTensor::new(super::raw_slots(&spec.basis, 2)));
    let m2 = cyc
        .get(&2)
        .cloned()
        .unwrap_or_else(|| SparseTensor::new(super::cyclic_slots(&spec.basis, 2)));
    report.record("cyclicity", check_cyclic(spec, 2, &m2));
    let table = product_table(spec, &m2_raw);
    report.record("associativity", check_associativity(spec, &table));
    report.record("leibniz", check_leibniz(spec, &table));
    report.record("leibniz_cyclic", check_leibniz_cyclic(spec, &m2));
    match contracted(spec) {
        Ok((bracket, idual)) => {
            report.record("associativity_contracted", monomial_witness(spec, &bracket));
            report.record("leibniz_contracted", monomial_witness(spec, &idual));
        }
        Err(e) => report.fail("associativity_contracted", vec![], e.to_string()),
    }
    report
}

/// `({F, F}, I(F))` for the product functional `F`.
fn contracted(spec: &AlgebraSpec) -> crate::Result<(Functional, Functional)> {
    let ctx = spec.bv_context()?;
    let f = spec.product_functional()?;
    Ok((ctx.bracket(&f, &f)?, ctx.i_dual(&f)?))
}

pub fn validate_a_infinity(spec: &AlgebraSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    check_kind(spec, AlgebraKind::AInfinity, &mut report);
    if !common_checks(spec, &mut report) {
        return report;
    }
    let cyc = match spec.cyclic_forms() {
        Ok(c) => c,
        Err(e) => {
            report.fail("products", vec![], e.to_string());
            return report;
        }
    };
    let mut cyc_fail = None;
    for (&n, t) in &cyc {
        if let Some(f) = check_cyclic(spec, n, t) {
            cyc_fail = Some(f);
            break;
        }
    }
    report.record("cyclicity", cyc_fail);
    match contracted(spec) {
        Ok((bracket, idual)) => {
            let mut r = bracket.scaled(&(q(1) / q(2)));
            r.add_assign(&idual);
            report.record("a_infinity_relation", monomial_witness(spec, &r));
        }
        Err(e) => report.fail("a_infinity_relation", vec![], e.to_string()),
    }
    report
}

pub fn check_delta_m_zero(spec: &AlgebraSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let result = (|| -> crate::Result<Vec<(usize, Functional)>> {
        let ctx = spec.bv_context()?;
        let par = spec.letter_parities();
        let mut out = Vec::new();
        for (&n, t) in &spec.cyclic_forms()? {
            let f = Functional::from_cyclic_entries(t.entries(), 0, &par)?;
            out.push((n, ctx.delta(&f)?));
        }
        Ok(out)
    })();
    match result {
        Err(e) => report.fail("delta_m", vec![], e.to_string()),
        Ok(list) => {
            for (n, d) in list {
                report.record(&format!("delta_m{n}"), monomial_witness(spec, &d));
            }
        }
    }
    report
}

#[cfg(test)]
pub(super) fn product_table_for_tests(spec: &AlgebraSpec) -> Vec<Vec<Vec<Q>>> {
    let m2 = spec
        .raw_products
        .get(&2)
        .cloned()
        .unwrap_or_else(|| SparseTensor::new(super::raw_slots(&spec.basis, 2)));
    product_table(spec, &m2)
}

#[cfg(test)]
pub(super) fn associative_for_tests(spec: &AlgebraSpec, table: &[Vec<Vec<Q>>]) -> bool {
    check_associativity(spec, table).is_none()
}

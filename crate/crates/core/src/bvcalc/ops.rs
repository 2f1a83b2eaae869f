use super::{Functional, Letter, Monomial, TermKey};
use crate::superlinear::{fmt_q, koszul_sign_unchecked, q, Matrix, Parity, Sign, Q};
use crate::{Error, Result};
use num_traits::Zero;

/// Letter parities, the inverse pairing used by the BV operator, and an
/// optional odd operator acting on letters.
#[derive(Debug, Clone)]
pub struct BvContext {
    parities: Vec<Parity>,
    pairing: Matrix,
    derivation: Option<Matrix>,
}

/// Outcome of evaluating the master equation residual on a window.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub max_letters: usize,
    pub max_hbar: u32,
    pub residual: Functional,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Position ranges of the cycles of a monomial inside its linear sequence.
fn cycle_ranges(m: &Monomial) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for c in m.cycles() {
        out.push((start, c.len()));
        start += c.len();
    }
    out
}

/// Positions of a cycle read cyclically starting just after `pos`, stopping
/// before `pos`.
fn arc_after(start: usize, len: usize, pos: usize) -> Vec<usize> {
    let off = pos - start;
    (1..len).map(|k| start + (off + k) % len).collect()
}

impl BvContext {
    /// `pairing[(a, b)]` is the coefficient of the contraction of letters
    /// `a` and `b`; it must be symmetric and pair letters of opposite parity.
    pub fn new(parities: Vec<Parity>, pairing: Matrix) -> Result<Self> {
        let n = parities.len();
        if pairing.rows() != n || pairing.cols() != n {
            return Err(Error::Argument(format!(
                "pairing is {}x{} for {n} letters",
                pairing.rows(),
                pairing.cols()
            )));
        }
        for a in 0..n {
            for b in 0..n {
                let v = &pairing[(a, b)];
                if v.is_zero() {
                    continue;
                }
                if parities[a] == parities[b] {
                    return Err(Error::Argument(format!(
                        "pairing couples letters {a} and {b} of equal parity"
                    )));
                }
                if *v != pairing[(b, a)] {
                    return Err(Error::Argument(format!("pairing is not symmetric at ({a}, {b})")));
                }
            }
        }
        Ok(BvContext {
            parities,
            pairing,
            derivation: None,
        })
    }

    /// Odd operator on letters; letter `a` is replaced by
    /// `sum_b op[(a, b)] b`.
    pub fn with_derivation(mut self, op: Matrix) -> Result<Self> {
        let n = self.parities.len();
        if op.rows() != n || op.cols() != n {
            return Err(Error::Argument("derivation has the wrong size".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if !op[(a, b)].is_zero() && self.parities[a] == self.parities[b] {
                    return Err(Error::Argument(format!("derivation entry ({a}, {b}) is not odd")));
                }
            }
        }
        self.derivation = Some(op);
        Ok(self)
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn pairing(&self) -> &Matrix {
        &self.pairing
    }

    pub fn derivation(&self) -> Option<&Matrix> {
        self.derivation.as_ref()
    }

    fn seq_parities(&self, seq: &[Letter]) -> Vec<Parity> {
        seq.iter().map(|&l| self.parities[l as usize]).collect()
    }

    /// Contracts positions `p` and `q` of `seq`, whose cycles are given by
    /// `ranges`, and adds the result to `out`.
    #[allow(clippy::too_many_arguments)]
    fn contract_pair(
        &self,
        seq: &[Letter],
        par: &[Parity],
        ranges: &[(usize, usize)],
        cp: usize,
        p: usize,
        cq: usize,
        q_: usize,
        hbar: u32,
        coeff: Q,
        out: &mut Functional,
    ) -> Result<()> {
        let c = &self.pairing[(seq[p] as usize, seq[q_] as usize)];
        if c.is_zero() {
            return Ok(());
        }
        let mut new_cycles: Vec<Vec<usize>> = Vec::new();
        if cp == cq {
            let (s, len) = ranges[cp];
            let after_p = arc_after(s, len, p);
            let k = after_p.iter().position(|&x| x == q_).expect("same cycle");
            let u = after_p[..k].to_vec();
            let v = after_p[k + 1..].to_vec();
            if u.is_empty() || v.is_empty() {
                return Ok(());
            }
            new_cycles.push(u);
            new_cycles.push(v);
        } else {
            let (sp, lp) = ranges[cp];
            let (sq, lq) = ranges[cq];
            if lp == 1 && lq == 1 {
                return Ok(());
            }
            let mut merged = arc_after(sp, lp, p);
            merged.extend(arc_after(sq, lq, q_));
            new_cycles.push(merged);
        }
        for (ci, &(s, len)) in ranges.iter().enumerate() {
            if ci != cp && ci != cq {
                new_cycles.push((s..s + len).collect());
            }
        }
        let mut perm = vec![p, q_];
        perm.extend(new_cycles.iter().flatten().copied());
        let sign = koszul_sign_unchecked(&perm, par);
        let letters: Vec<Vec<Letter>> = new_cycles
            .iter()
            .map(|cyc| cyc.iter().map(|&i| seq[i]).collect())
            .collect();
        out.add_term(hbar, &letters, sign.apply(coeff * c), &self.parities)
    }

    /// The BV operator: sum over contractions of two letters of a monomial.
    pub fn delta(&self, f: &Functional) -> Result<Functional> {
        let mut out = Functional::new();
        for (key, coeff) in f.terms() {
            let seq = key.monomial.linear();
            let par = self.seq_parities(&seq);
            let ranges = cycle_ranges(&key.monomial);
            for (cp, &(sp, lp)) in ranges.iter().enumerate() {
                for p in sp..sp + lp {
                    for (cq, &(sq, lq)) in ranges.iter().enumerate().skip(cp) {
                        let lo = if cq == cp { p + 1 } else { sq };
                        for q_ in lo..sq + lq {
                            self.contract_pair(
                                &seq,
                                &par,
                                &ranges,
                                cp,
                                p,
                                cq,
                                q_,
                                key.hbar,
                                coeff.clone(),
                                &mut out,
                            )?;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The odd bracket: contractions with one letter in each factor, times
    /// the parity sign of the first factor.
    pub fn bracket(&self, f: &Functional, g: &Functional) -> Result<Functional> {
        let mut out = Functional::new();
        for (kf, vf) in f.terms() {
            let f_odd = kf.monomial.parity(&self.parities).is_odd();
            for (kg, vg) in g.terms() {
                let cycles: Vec<&[Letter]> = kf
                    .monomial
                    .cycles()
                    .iter()
                    .chain(kg.monomial.cycles())
                    .map(|c| c.letters())
                    .collect();
                let seq: Vec<Letter> = cycles.iter().flat_map(|c| c.iter().copied()).collect();
                let par = self.seq_parities(&seq);
                let mut ranges = Vec::new();
                let mut start = 0;
                for c in &cycles {
                    ranges.push((start, c.len()));
                    start += c.len();
                }
                let nf = kf.monomial.cycles().len();
                let coeff = Sign(f_odd).apply(vf * vg);
                let hbar = kf.hbar + kg.hbar;
                for cp in 0..nf {
                    let (sp, lp) = ranges[cp];
                    for p in sp..sp + lp {
                        for cq in nf..ranges.len() {
                            let (sq, lq) = ranges[cq];
                            for q_ in sq..sq + lq {
                                self.contract_pair(
                                    &seq,
                                    &par,
                                    &ranges,
                                    cp,
                                    p,
                                    cq,
                                    q_,
                                    hbar,
                                    coeff.clone(),
                                    &mut out,
                                )?;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Extends the odd operator on letters to an odd derivation.
    pub fn i_dual(&self, f: &Functional) -> Result<Functional> {
        let mut out = Functional::new();
        let Some(op) = &self.derivation else {
            return Ok(out);
        };
        for (key, coeff) in f.terms() {
            let seq = key.monomial.linear();
            let ranges = cycle_ranges(&key.monomial);
            let mut before = Parity::Even;
            for (pos, &letter) in seq.iter().enumerate() {
                for b in 0..self.parities.len() {
                    let x = &op[(letter as usize, b)];
                    if x.is_zero() {
                        continue;
                    }
                    let mut new_seq = seq.clone();
                    new_seq[pos] = b as Letter;
                    let cycles: Vec<&[Letter]> = ranges.iter().map(|&(s, l)| &new_seq[s..s + l]).collect();
                    out.add_term(
                        key.hbar,
                        &cycles,
                        Sign::from_parity(before).apply(coeff * x),
                        &self.parities,
                    )?;
                }
                before = before + self.parities[letter as usize];
            }
        }
        Ok(out)
    }

    /// `hbar * delta(S) + (1/2){S, S} + I(S)` restricted to monomials with at
    /// most `max_letters` letters and hbar power at most `max_hbar`.
    ///
    /// `truncation` gives the bounds up to which `s` is known to be complete;
    /// they must reach `max_letters + 2` and `max_hbar`.
    pub fn residual(
        &self,
        s: &Functional,
        truncation: (usize, u32),
        max_letters: usize,
        max_hbar: u32,
    ) -> Result<ResidualReport> {
        if truncation.0 < max_letters + 2 || truncation.1 < max_hbar {
            return Err(Error::Window(format!(
                "window (letters <= {max_letters}, hbar <= {max_hbar}) needs the action \
                 through letters <= {} and hbar <= {max_hbar}, but it is only known through \
                 letters <= {} and hbar <= {}",
                max_letters + 2,
                truncation.0,
                truncation.1
            )));
        }
        let s = s.truncated(max_letters + 2, max_hbar);
        let mut r = Functional::new();
        if max_hbar > 0 {
            let d = self.delta(&s.truncated(max_letters + 2, max_hbar - 1))?;
            for (k, v) in d.terms() {
                r.add_canonical(
                    TermKey {
                        hbar: k.hbar + 1,
                        monomial: k.monomial.clone(),
                    },
                    v.clone(),
                );
            }
        }
        r.add_assign(&self.bracket(&s, &s)?.scaled(&(q(1) / q(2))));
        r.add_assign(&self.i_dual(&s)?);
        Ok(ResidualReport {
            max_letters,
            max_hbar,
            residual: r.truncated(max_letters, max_hbar),
        })
    }
}

impl ResidualReport {
    /// Human readable list of nonzero coefficients.
    pub fn describe(&self) -> Vec<String> {
        self.residual
            .terms()
            .map(|(k, v)| {
                let cycles: Vec<String> = k
                    .monomial
                    .cycles()
                    .iter()
                    .map(|c| format!("{:?}", c.letters()))
                    .collect();
                format!("hbar^{} [{}]: {}", k.hbar, cycles.join(" "), fmt_q(v))
            })
            .collect()
    }
}

/// The two-letter functional of the differential on B: single cycles
/// `(a b)` weighted by `beta(I e_a, e_b)`. Requires `I^2 = 0`.
pub fn quadratic_term(i_op: &Matrix, beta: &Matrix, parities: &[Parity]) -> Result<Functional> {
    if !(i_op * i_op).is_zero() {
        return Err(Error::Refused(
            "the quadratic term is only defined when I squares to zero on B".into(),
        ));
    }
    let form = &i_op.transpose() * beta;
    let mut out = Functional::new();
    let d = parities.len();
    for a in 0..d {
        for b in 0..d {
            let v = &form[(a, b)];
            if !v.is_zero() {
                out.add_term(0, &[[a as Letter, b as Letter]], v / q(2), parities)?;
            }
        }
    }
    Ok(out)
}

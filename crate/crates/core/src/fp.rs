//! Word-sized arithmetic over a prime field for the enumeration hot loops.

use crate::error::JetError;
use crate::field::{Field, FieldValue};
use crate::poly::MultiPoly;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Fp(pub u32);

impl Fp {
    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }
    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }
}

pub(crate) fn prime_of(field: Field) -> Result<u32, JetError> {
    match field {
        Field::Prime(p) => Ok(p),
        Field::Rational => Err(JetError::NotFinite("Q".into())),
    }
}

pub(crate) fn residue(v: &FieldValue) -> u32 {
    v.residue().expect("prime field value")
}

/// A polynomial with residues as coefficients.
#[derive(Clone, Debug)]
pub(crate) struct FpPoly {
    pub terms: Vec<(u32, Vec<u32>)>,
    pub max_deg: Vec<u32>,
}

impl FpPoly {
    pub fn compile(p: &MultiPoly) -> Self {
        let n = p.nvars();
        let mut max_deg = vec![0; n];
        let terms = p
            .terms()
            .iter()
            .map(|(e, c)| {
                for (m, &k) in max_deg.iter_mut().zip(e) {
                    *m = (*m).max(k);
                }
                (residue(c), e.clone())
            })
            .collect();
        Self { terms, max_deg }
    }

    pub fn eval_point(&self, fp: Fp, x: &[u32]) -> u32 {
        let mut acc = 0;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = fp.mul(t, x[i]);
                }
            }
            acc = fp.add(acc, t);
        }
        acc
    }

    /// Evaluates along series coordinates of common length `len`; `out` receives
    /// the `len` coefficients.
    pub fn eval_series(&self, fp: Fp, coords: &[&[u32]], len: usize, scratch: &mut Scratch, out: &mut [u32]) {
        out[..len].fill(0);
        scratch.build_powers(fp, coords, &self.max_deg, len);
        let mut term = vec![0u32; len];
        let mut tmp = vec![0u32; len];
        for (c, e) in &self.terms {
            term.fill(0);
            term[0] = *c;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                series_mul(fp, &term, scratch.power(i, k as usize), len, &mut tmp);
                std::mem::swap(&mut term, &mut tmp);
            }
            for j in 0..len {
                out[j] = fp.add(out[j], term[j]);
            }
        }
    }

    /// Order of vanishing along the series, or `None` if all `len` coefficients vanish.
    pub fn order_along(&self, fp: Fp, coords: &[&[u32]], len: usize, scratch: &mut Scratch) -> Option<usize> {
        let mut out = vec![0u32; len];
        self.eval_series(fp, coords, len, scratch, &mut out);
        out.iter().position(|&c| c != 0)
    }
}

pub(crate) fn series_mul(fp: Fp, a: &[u32], b: &[u32], len: usize, out: &mut [u32]) {
    out[..len].fill(0);
    for i in 0..len {
        if a[i] == 0 {
            continue;
        }
        for j in 0..len - i {
            if b[j] != 0 {
                out[i + j] = fp.add(out[i + j], fp.mul(a[i], b[j]));
            }
        }
    }
}

/// Cached powers `x_i(t)^k` for one evaluation point.
#[derive(Default)]
pub(crate) struct Scratch {
    powers: Vec<Vec<Vec<u32>>>,
}

impl Scratch {
    fn build_powers(&mut self, fp: Fp, coords: &[&[u32]], max_deg: &[u32], len: usize) {
        self.powers.resize_with(coords.len(), Vec::new);
        for (i, x) in coords.iter().enumerate() {
            let d = max_deg.get(i).copied().unwrap_or(0) as usize;
            let pw = &mut self.powers[i];
            pw.clear();
            let mut one = vec![0u32; len];
            one[0] = 1;
            pw.push(one);
            for k in 1..=d {
                let mut next = vec![0u32; len];
                series_mul(fp, &pw[k - 1], x, len, &mut next);
                pw.push(next);
            }
        }
    }

    fn power(&self, i: usize, k: usize) -> &[u32] {
        &self.powers[i][k]
    }
}

/// Minimum order of a list of polynomials along series coordinates; `None` means
/// every generator vanishes to the given length.
pub(crate) fn ideal_order(polys: &[FpPoly], fp: Fp, coords: &[&[u32]], len: usize, scratch: &mut Scratch) -> Option<usize> {
    let mut best: Option<usize> = None;
    for g in polys {
        let l = best.unwrap_or(len);
        if l == 0 {
            break;
        }
        if let Some(o) = g.order_along(fp, coords, l, scratch) {
            best = Some(best.map_or(o, |b| b.min(o)));
        }
    }
    best
}

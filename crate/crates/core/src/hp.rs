//! Extended-precision quadrature for spectra with a large dynamic range.
//!
//! When max |H| on the grid is large, the f64 FFT leaves an absolute noise
//! floor of roughly eps * max |H| on every coefficient, which swamps the
//! (exactly zero) negative-index coefficients of a causal kernel. This module
//! runs the same uniform rule with `astro-float` numbers so the floor drops by
//! the extra mantissa width.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_complex::Complex64;

const RM: RoundingMode = RoundingMode::ToEven;

/// Mantissa width used by the extended path.
pub const DEFAULT_PRECISION_BITS: usize = 128;

#[derive(Clone, Debug)]
pub(crate) struct HpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

pub(crate) struct HpContext {
    pub p: usize,
    pub cc: Consts,
}

impl HpContext {
    pub fn new(p: usize) -> Self {
        HpContext {
            p,
            cc: Consts::new().expect("astro-float constants cache"),
        }
    }

    pub fn num(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.p)
    }

    pub fn complex(&self, v: Complex64) -> HpComplex {
        HpComplex {
            re: self.num(v.re),
            im: self.num(v.im),
        }
    }

    pub fn add(&self, a: &HpComplex, b: &HpComplex) -> HpComplex {
        HpComplex {
            re: a.re.add(&b.re, self.p, RM),
            im: a.im.add(&b.im, self.p, RM),
        }
    }

    pub fn sub(&self, a: &HpComplex, b: &HpComplex) -> HpComplex {
        HpComplex {
            re: a.re.sub(&b.re, self.p, RM),
            im: a.im.sub(&b.im, self.p, RM),
        }
    }

    pub fn mul(&self, a: &HpComplex, b: &HpComplex) -> HpComplex {
        let p = self.p;
        HpComplex {
            re: a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM),
            im: a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM),
        }
    }

    /// exp(a + ib) = e^a (cos b + i sin b).
    pub fn exp(&mut self, z: &HpComplex) -> HpComplex {
        let p = self.p;
        let mag = z.re.exp(p, RM, &mut self.cc);
        let c = z.im.cos(p, RM, &mut self.cc);
        let s = z.im.sin(p, RM, &mut self.cc);
        HpComplex {
            re: mag.mul(&c, p, RM),
            im: mag.mul(&s, p, RM),
        }
    }

    /// 1 / z.
    pub fn recip(&self, z: &HpComplex) -> HpComplex {
        let p = self.p;
        let den = z.re.mul(&z.re, p, RM).add(&z.im.mul(&z.im, p, RM), p, RM);
        HpComplex {
            re: z.re.div(&den, p, RM),
            im: z.im.div(&den, p, RM).neg(),
        }
    }

    pub fn powf(&mut self, base: f64, exponent: f64) -> BigFloat {
        let p = self.p;
        self.num(base)
            .pow(&self.num(exponent), p, RM, &mut self.cc)
    }

    /// exp(2 pi i j / n) for j in 0..n, built from one octant of sin/cos.
    pub fn roots_of_unity(&mut self, n: usize) -> Vec<HpComplex> {
        assert!(n >= 8 && n.is_power_of_two());
        let p = self.p;
        let pi = self.cc.pi(p, RM);
        let two_pi_over_n = pi
            .mul(&self.num(2.0), p, RM)
            .div(&self.num(n as f64), p, RM);
        let eighth = n / 8;
        let mut octant = Vec::with_capacity(eighth + 1);
        for j in 0..=eighth {
            let theta = two_pi_over_n.mul(&self.num(j as f64), p, RM);
            let c = theta.cos(p, RM, &mut self.cc);
            let s = theta.sin(p, RM, &mut self.cc);
            octant.push((c, s));
        }
        let quarter = n / 4;
        let half = n / 2;
        let first_quarter = |j: usize| -> (BigFloat, BigFloat) {
            if j <= eighth {
                octant[j].clone()
            } else {
                let (c, s) = &octant[quarter - j];
                (s.clone(), c.clone())
            }
        };
        let first_half = |j: usize| -> (BigFloat, BigFloat) {
            if j <= quarter {
                first_quarter(j)
            } else {
                let (c, s) = first_quarter(j - quarter);
                (s.neg(), c)
            }
        };
        (0..n)
            .map(|j| {
                let (c, s) = if j <= half {
                    first_half(j)
                } else {
                    let (c, s) = first_half(j - half);
                    (c.neg(), s.neg())
                };
                HpComplex { re: c, im: s }
            })
            .collect()
    }

    /// In-place unnormalised inverse DFT: out_k = sum_j in_j exp(2 pi i j k / n).
    pub fn inverse_fft(&self, data: &mut [HpComplex], roots: &[HpComplex]) {
        let n = data.len();
        assert_eq!(roots.len(), n);
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let step = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..len / 2 {
                    let w = &roots[k * step];
                    let t = self.mul(w, &data[start + k + len / 2]);
                    let a = data[start + k].clone();
                    data[start + k] = self.add(&a, &t);
                    data[start + k + len / 2] = self.sub(&a, &t);
                }
            }
            len <<= 1;
        }
    }

    /// Same output layout as [`crate::quadrature::coefficients`].
    pub fn coefficients(&self, samples: Vec<HpComplex>, roots: &[HpComplex]) -> Vec<Complex64> {
        let n = samples.len();
        let mut buf = samples;
        self.inverse_fft(&mut buf, roots);
        let scale = 1.0 / n as f64;
        let half = n / 2;
        (0..n)
            .map(|pos| {
                let k = pos as i64 - half as i64;
                let v = &buf[k.rem_euclid(n as i64) as usize];
                let c = Complex64::new(to_f64(&v.re), to_f64(&v.im)) * scale;
                if k.rem_euclid(2) == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }
}

/// Nearest-ish f64 (within one ulp) of an astro-float number.
pub(crate) fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = words[words.len() - 1] as f64;
    let next = if words.len() > 1 {
        words[words.len() - 2] as f64
    } else {
        0.0
    };
    // value = 0.m * 2^exp with m read most-significant word first
    let mag = ldexp(top, exp - 64) + ldexp(next, exp - 128);
    match sign {
        Sign::Neg => -mag,
        Sign::Pos => mag,
    }
}

fn ldexp(mut x: f64, mut e: i32) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

/// Grid nodes exp(i w_j) = -exp(2 pi i j / n) in extended precision.
pub(crate) fn unit_circle_nodes(roots: &[HpComplex]) -> Vec<HpComplex> {
    roots
        .iter()
        .map(|r| HpComplex {
            re: r.re.neg(),
            im: r.im.neg(),
        })
        .collect()
}

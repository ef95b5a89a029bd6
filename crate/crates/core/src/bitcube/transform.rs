use super::{CubeFunction, Normalization, Spectrum, DEFAULT_DENSE_CAP};
use crate::error::{Error, Result};

/// Unnormalized in-place Walsh–Hadamard butterfly:
/// `a[v] ← Σ_x a[x](−1)^{x·v}`. Length must be a power of two.
pub fn fwht_in_place(a: &mut [f64]) {
    let len = a.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in a.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        h *= 2;
    }
}

fn check_cap(n: u32, cap: u32) -> Result<()> {
    if n > cap {
        Err(Error::Capacity { n, cap })
    } else {
        Ok(())
    }
}

/// Forward transform under the default dense cap.
pub fn wht_forward(f: &CubeFunction) -> Result<Spectrum> {
    wht_forward_capped(f, DEFAULT_DENSE_CAP)
}

/// `ĥ(v) = 2^{-n} Σ_x f(x)(−1)^{x·v}`, refusing dimensions above `cap`.
pub fn wht_forward_capped(f: &CubeFunction, cap: u32) -> Result<Spectrum> {
    check_cap(f.n(), cap)?;
    let mut coeffs = f.values().to_vec();
    fwht_in_place(&mut coeffs);
    let scale = (-(f.n() as f64)).exp2();
    coeffs.iter_mut().for_each(|c| *c *= scale);
    Spectrum::new(f.n(), coeffs, Normalization::Hat)
}

/// `p(x) = Σ_v ĥ(v)(−1)^{x·v}`.
pub fn wht_inverse(s: &Spectrum) -> Result<CubeFunction> {
    if s.normalization() != Normalization::Hat {
        return Err(Error::Normalization { expected: "hat" });
    }
    check_cap(s.n(), DEFAULT_DENSE_CAP)?;
    let mut values = s.coeffs().to_vec();
    fwht_in_place(&mut values);
    CubeFunction::new(s.n(), values)
}

/// `(p̂ ∗ q̂)(v) = Σ_x p̂(x) q̂(x⊕v)`, the spectrum of the pointwise product.
pub fn convolve_spectra(p: &Spectrum, q: &Spectrum) -> Result<Spectrum> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch(p.n(), q.n()));
    }
    if p.normalization() != Normalization::Hat || q.normalization() != Normalization::Hat {
        return Err(Error::Normalization { expected: "hat" });
    }
    let product = wht_inverse(p)?.pointwise_product(&wht_inverse(q)?)?;
    wht_forward(&product)
}

/// Rescale a hat spectrum of an indicator to `h̃ = (2^n/|A|)·ĥ`.
pub fn tilde_normalize(s: &Spectrum, set_size: u64) -> Result<Spectrum> {
    if s.normalization() != Normalization::Hat {
        return Err(Error::Normalization { expected: "hat" });
    }
    if set_size == 0 {
        return Err(Error::EmptySet);
    }
    let scale = (s.n() as f64).exp2() / set_size as f64;
    let coeffs = s.coeffs().iter().map(|c| c * scale).collect();
    Spectrum::new(s.n(), coeffs, Normalization::Tilde { set_size })
}

/// Tilde spectrum of an indicator function.
pub fn tilde_spectrum(indicator: &CubeFunction) -> Result<Spectrum> {
    if !indicator.is_indicator() {
        return Err(Error::Precondition("tilde spectrum needs a 0/1 indicator".into()));
    }
    tilde_normalize(&wht_forward(indicator)?, indicator.support_size())
}

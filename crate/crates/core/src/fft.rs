//! Two-dimensional FFTs over a [`GridSpec`].
//!
//! Normalization: the forward transform divides by `n²`, the inverse does not
//! scale, so `f(x) = Σₖ f̂(k) e^{ik·x}` and `∫|f|² = L² Σₖ |f̂(k)|²`.
//!
//! Real fields are always transformed two at a time by packing them into the
//! real and imaginary parts of one complex array. The forward split
//! `A(k) = (F(k) + F̄(−k))/2` makes every returned spectrum exactly Hermitian.
//!
//! Row transforms are distributed over the rayon pool. Each row is an
//! independent computation with no reduction across rows, so results are
//! bit-identical for any thread count.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::grid::GridSpec;

/// Grids below this size are transformed on the calling thread.
const PARALLEL_MIN_N: usize = 128;

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Arc<Plans> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Plans>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("fft plan cache poisoned");
    map.entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plans {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

fn rows(fft: &Arc<dyn Fft<f64>>, data: &mut [Complex64], n: usize) {
    let scratch_len = fft.get_inplace_scratch_len();
    if n >= PARALLEL_MIN_N {
        data.par_chunks_mut(n * 8).for_each(|block| {
            let mut scratch = vec![Complex64::default(); scratch_len];
            fft.process_with_scratch(block, &mut scratch);
        });
    } else {
        let mut scratch = vec![Complex64::default(); scratch_len];
        fft.process_with_scratch(data, &mut scratch);
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

fn fft2(fft: &Arc<dyn Fft<f64>>, data: &mut [Complex64], n: usize) {
    rows(fft, data, n);
    transpose(data, n);
    rows(fft, data, n);
    transpose(data, n);
}

/// In-place unnormalized forward 2D DFT of a complex array.
pub fn forward_complex(grid: &GridSpec, data: &mut [Complex64]) {
    let n = grid.n();
    assert_eq!(data.len(), n * n, "array does not match grid");
    fft2(&plans(n).forward, data, n);
}

/// In-place unnormalized inverse 2D DFT of a complex array.
pub fn inverse_complex(grid: &GridSpec, data: &mut [Complex64]) {
    let n = grid.n();
    assert_eq!(data.len(), n * n, "array does not match grid");
    fft2(&plans(n).inverse, data, n);
}

/// Forward transform of two real arrays; both spectra are Hermitian.
pub fn forward_pair(grid: &GridSpec, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = grid.n();
    let len = n * n;
    assert!(a.len() == len && b.len() == len, "array does not match grid");
    let mut packed: Vec<Complex64> = a
        .iter()
        .zip(b)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    forward_complex(grid, &mut packed);
    let scale = 1.0 / len as f64;
    let mut fa = vec![Complex64::default(); len];
    let mut fb = vec![Complex64::default(); len];
    for iy in 0..n {
        for ix in 0..n {
            let idx = iy * n + ix;
            let f = packed[idx];
            let g = packed[grid.conjugate_index(ix, iy)].conj();
            fa[idx] = (f + g) * (0.5 * scale);
            // (f - g) / 2i
            let d = (f - g) * (0.5 * scale);
            fb[idx] = Complex64::new(d.im, -d.re);
        }
    }
    (fa, fb)
}

/// Inverse transform of two spectra to real arrays. Only the Hermitian part of
/// each input contributes.
pub fn inverse_pair(grid: &GridSpec, fa: &[Complex64], fb: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    let len = grid.len();
    assert!(fa.len() == len && fb.len() == len, "array does not match grid");
    let mut packed: Vec<Complex64> = fa
        .iter()
        .zip(fb)
        .map(|(&x, &y)| x + Complex64::new(-y.im, y.re))
        .collect();
    inverse_complex(grid, &mut packed);
    let a = packed.iter().map(|c| c.re).collect();
    let b = packed.iter().map(|c| c.im).collect();
    (a, b)
}

/// Forward transform of a single real array.
pub fn forward_real(grid: &GridSpec, a: &[f64]) -> Vec<Complex64> {
    let zeros = vec![0.0; grid.len()];
    forward_pair(grid, a, &zeros).0
}

/// Inverse transform of a single spectrum.
pub fn inverse_real(grid: &GridSpec, fa: &[Complex64]) -> Vec<f64> {
    let zeros = vec![Complex64::default(); grid.len()];
    inverse_pair(grid, fa, &zeros).0
}

//! Two-dimensional complex FFT on square row-major buffers, backed by
//! `rustfft`. Plans are cached per `(n, direction)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::C64;

type PlanCache = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    let key = (n, matches!(direction, FftDirection::Forward));
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    cache
        .entry(key)
        .or_insert_with(|| FftPlanner::new().plan_fft(n, direction))
        .clone()
}

const PARALLEL_THRESHOLD: usize = 128;

fn rows(buf: &mut [C64], n: usize, fft: &Arc<dyn Fft<f64>>) {
    if n >= PARALLEL_THRESHOLD {
        let rows_per_task = (4096 / n).max(1);
        buf.par_chunks_mut(n * rows_per_task).for_each(|chunk| fft.process(chunk));
    } else {
        fft.process(buf);
    }
}

fn transpose(buf: &mut [C64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

/// Unnormalized 2D DFT in place: `X[k] = Σ_j x[j] e^{∓2πi k·j/n}`.
pub(crate) fn fft2(buf: &mut [C64], n: usize, direction: FftDirection) {
    debug_assert_eq!(buf.len(), n * n);
    let fft = plan(n, direction);
    rows(buf, n, &fft);
    transpose(buf, n);
    rows(buf, n, &fft);
    transpose(buf, n);
}

/// Unnormalized 1D DFTs of consecutive length-`len` chunks of `buf`.
pub(crate) fn fft_batched(buf: &mut [C64], len: usize, direction: FftDirection) {
    debug_assert_eq!(buf.len() % len, 0);
    let fft = plan(len, direction);
    fft.process(buf);
}

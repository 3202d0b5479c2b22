//! In-place unnormalized Walsh–Hadamard transform over `Z_2^m`.

use core::ops::{Add, Sub};

/// Butterfly transform `out[s] = sum_x (-1)^{popcount(s & x)} in[x]`.
///
/// Panics if the length is not a power of two.
pub fn fwht<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    assert!(len.is_power_of_two(), "length {len} is not a power of two");
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half <<= 1;
    }
}

/// XOR convolution `out[s] = sum_t a[t] b[s ^ t]`.
pub fn xor_convolve(a: &[f64], b: &[f64]) -> alloc::vec::Vec<f64> {
    assert_eq!(a.len(), b.len());
    let mut fa = a.to_vec();
    let mut fb = b.to_vec();
    fwht(&mut fa);
    fwht(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    fwht(&mut fa);
    let scale = 1.0 / a.len() as f64;
    fa.iter_mut().for_each(|x| *x *= scale);
    fa
}

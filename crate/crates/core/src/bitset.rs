//! Fixed-width bit sets over u64 words, used as scratch space by the
//! clique and pair-scan code paths.

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

pub(crate) fn zeroed(bits: usize) -> Vec<u64> {
    vec![0u64; words_for(bits)]
}

#[inline]
pub(crate) fn set(b: &mut [u64], i: u32) {
    b[(i / 64) as usize] |= 1u64 << (i % 64);
}

#[inline]
pub(crate) fn clear(b: &mut [u64], i: u32) {
    b[(i / 64) as usize] &= !(1u64 << (i % 64));
}

pub(crate) fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

pub(crate) fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

pub(crate) fn is_empty(a: &[u64]) -> bool {
    a.iter().all(|&x| x == 0)
}

pub(crate) fn and_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= s;
    }
}

pub(crate) fn and_not_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= !s;
    }
}

/// Indices of set bits, ascending.
pub(crate) fn iter_ones(a: &[u64]) -> impl Iterator<Item = u32> + '_ {
    a.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let tz = bits.trailing_zeros();
                bits &= bits - 1;
                Some(w as u32 * 64 + tz)
            }
        })
    })
}

pub(crate) fn from_indices(bits: usize, idx: &[u32]) -> Vec<u64> {
    let mut b = zeroed(bits);
    for &i in idx {
        set(&mut b, i);
    }
    b
}

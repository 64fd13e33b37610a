//! Half-sample symmetric boundary extension and the preimage tables needed to
//! transpose it.

/// Maps an out-of-range index onto `[0, n)` by mirroring about the pixel edges:
/// `-1 -> 0`, `-2 -> 1`, `n -> n - 1`. Periodic with period `2n`.
#[inline]
pub fn reflect(i: isize, n: usize) -> usize {
    debug_assert!(n > 0);
    let p = 2 * n as isize;
    let k = i.rem_euclid(p) as usize;
    if k >= n {
        2 * n - 1 - k
    } else {
        k
    }
}

/// For one image axis of length `n` and every shift `g` in `[-radius, radius]`,
/// tabulates the forward map `i -> reflect(i - g)` and its preimages.
#[derive(Debug, Clone)]
pub(crate) struct AxisMap {
    n: usize,
    radius: usize,
    /// `forward[(g + radius) * n + i] = reflect(i - g, n)`.
    forward: Vec<usize>,
    /// CSR offsets into `pre`, indexed by `(g + radius) * n + p`.
    offsets: Vec<usize>,
    pre: Vec<usize>,
}

impl AxisMap {
    pub fn new(n: usize, radius: usize) -> Self {
        let shifts = 2 * radius + 1;
        let mut forward = Vec::with_capacity(shifts * n);
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); shifts * n];
        for s in 0..shifts {
            let g = s as isize - radius as isize;
            for i in 0..n {
                let p = reflect(i as isize - g, n);
                forward.push(p);
                buckets[s * n + p].push(i);
            }
        }
        let mut offsets = Vec::with_capacity(shifts * n + 1);
        let mut pre = Vec::with_capacity(shifts * n);
        offsets.push(0);
        for b in buckets {
            pre.extend(b);
            offsets.push(pre.len());
        }
        Self {
            n,
            radius,
            forward,
            offsets,
            pre,
        }
    }

    /// `reflect(i - g)` where `s = g + radius`.
    #[inline]
    pub fn source(&self, s: usize, i: usize) -> usize {
        self.forward[s * self.n + i]
    }

    /// All `i` with `reflect(i - g) == p`, ascending, where `s = g + radius`.
    #[inline]
    pub fn preimages(&self, s: usize, p: usize) -> &[usize] {
        let k = s * self.n + p;
        &self.pre[self.offsets[k]..self.offsets[k + 1]]
    }

    #[allow(dead_code)]
    pub fn radius(&self) -> usize {
        self.radius
    }
}

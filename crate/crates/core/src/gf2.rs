//! Small GF(2) linear algebra on bitmask vectors.

/// Rank of the span of `vectors`.
pub fn rank(vectors: &[u32]) -> usize {
    reduced_basis(vectors).len()
}

/// Reduced row-echelon basis where the pivot of each row is its lowest set
/// bit (leftmost coordinate in text form). Rows come out by ascending pivot.
pub fn reduced_basis(vectors: &[u32]) -> Vec<u32> {
    // pivots[b] holds the row whose lowest set bit is b
    let mut pivots = [0u32; 32];
    for &v in vectors {
        let mut x = v;
        while x != 0 {
            let b = x.trailing_zeros() as usize;
            if pivots[b] == 0 {
                pivots[b] = x;
                break;
            }
            x ^= pivots[b];
        }
    }
    // back-substitute so each pivot column has a single one
    for b in 0..32 {
        if pivots[b] == 0 {
            continue;
        }
        for c in 0..32 {
            if c != b && pivots[c] != 0 && (pivots[c] >> b) & 1 == 1 {
                pivots[c] ^= pivots[b];
            }
        }
    }
    pivots.iter().copied().filter(|&r| r != 0).collect()
}

/// True if `v` lies in the span of a basis produced by [`reduced_basis`].
pub fn in_span(basis: &[u32], v: u32) -> bool {
    let mut x = v;
    for &r in basis {
        let b = r.trailing_zeros();
        if (x >> b) & 1 == 1 {
            x ^= r;
        }
    }
    x == 0
}

/// All linear combinations of `vectors`, ascending.
pub fn span(vectors: &[u32]) -> Vec<u32> {
    let basis = reduced_basis(vectors);
    let mut out = vec![0u32];
    for &b in &basis {
        let len = out.len();
        for i in 0..len {
            out.push(out[i] ^ b);
        }
    }
    out.sort_unstable();
    out
}

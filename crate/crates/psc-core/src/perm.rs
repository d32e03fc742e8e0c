//! Permutations as 0-based index vectors. A permutation `sigma` acts on a
//! list by moving the entry at position `i` to position `sigma[i]`.

pub fn is_permutation(sigma: &[usize]) -> bool {
    let mut seen = vec![false; sigma.len()];
    for &s in sigma {
        if s >= sigma.len() || seen[s] {
            return false;
        }
        seen[s] = true;
    }
    true
}

pub fn identity(k: usize) -> Vec<usize> {
    (0..k).collect()
}

pub fn inverse(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    inv
}

/// `(a ∘ b)[i] = a[b[i]]`
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

/// Moves `items[i]` to position `sigma[i]`.
pub fn permute<T: Clone>(items: &[T], sigma: &[usize]) -> Vec<T> {
    assert_eq!(items.len(), sigma.len(), "permutation size");
    let mut out: Vec<Option<T>> = vec![None; items.len()];
    for (i, item) in items.iter().enumerate() {
        out[sigma[i]] = Some(item.clone());
    }
    out.into_iter().map(|x| x.expect("permutation")).collect()
}

/// Permutation of `sum(sizes)` points that moves block `i` (of length
/// `sizes[i]`) as a whole to block position `sigma[i]`, keeping the order
/// inside each block.
pub fn block_permutation(sigma: &[usize], sizes: &[usize]) -> Vec<usize> {
    assert_eq!(sigma.len(), sizes.len(), "block count");
    let inv = inverse(sigma);
    // offset of each target block position
    let mut target_offset = vec![0; sizes.len()];
    let mut acc = 0;
    for (p, &src) in inv.iter().enumerate() {
        target_offset[p] = acc;
        acc += sizes[src];
    }
    let mut out = Vec::with_capacity(acc);
    for (i, &size) in sizes.iter().enumerate() {
        for m in 0..size {
            out.push(target_offset[sigma[i]] + m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permute_moves_entries_forward() {
        // sigma sends position 0 to 1, 1 to 2, 2 to 0
        let out = permute(&['a', 'b', 'c'], &[1, 2, 0]);
        assert_eq!(out, vec!['c', 'a', 'b']);
        let back = permute(&out, &inverse(&[1, 2, 0]));
        assert_eq!(back, vec!['a', 'b', 'c']);
    }

    #[test]
    fn permute_respects_composition() {
        let a = [2, 0, 1, 3];
        let b = [1, 3, 0, 2];
        let items = [10, 20, 30, 40];
        assert_eq!(
            permute(&permute(&items, &b), &a),
            permute(&items, &compose(&a, &b))
        );
    }

    #[test]
    fn block_permutation_swaps_blocks() {
        // blocks [0,1] [2] [3,4,5], sigma swaps the first and last block
        let p = block_permutation(&[2, 1, 0], &[2, 1, 3]);
        let moved = permute(&[0, 1, 2, 3, 4, 5], &p);
        assert_eq!(moved, vec![3, 4, 5, 2, 0, 1]);
        assert!(is_permutation(&p));
    }

    #[test]
    fn detects_non_permutations() {
        assert!(!is_permutation(&[0, 0]));
        assert!(!is_permutation(&[2, 0]));
        assert!(is_permutation(&[]));
    }
}

//! Small enumeration helpers shared by the modules.

/// Partitions of `d` into exactly `n` positive parts, each sorted ascending;
/// the list is in lexicographic order.
pub fn partitions_exact(d: u32, n: usize) -> Vec<Vec<u32>> {
    fn go(rem: u32, slots: usize, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut p = min;
        while p as u64 * slots as u64 <= rem as u64 {
            cur.push(p);
            go(rem - p, slots - 1, p, cur, out);
            cur.pop();
            p += 1;
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(vec![]);
        }
        return out;
    }
    go(d, n, 1, &mut Vec::new(), &mut out);
    out
}

/// All partitions of `d`, by number of parts then lexicographically.
pub fn partitions(d: u32) -> Vec<Vec<u32>> {
    (1..=d as usize).flat_map(|n| partitions_exact(d, n)).collect()
}

/// `∏ (multiplicity)!` for a sorted list.
pub fn aut_order<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut out = 1u64;
    let mut run = 1u64;
    for i in 1..=sorted.len() {
        if i < sorted.len() && sorted[i] == sorted[i - 1] {
            run += 1;
            out *= run;
        } else {
            run = 1;
        }
    }
    out
}

/// Distinct orderings of a multiset given as a sorted list.
pub fn distinct_permutations<T: Clone + Ord>(sorted: &[T]) -> Vec<Vec<T>> {
    let mut cur = sorted.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    // Standard next-permutation walk visits each distinct ordering once.
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

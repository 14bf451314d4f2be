//! Small helpers shared by the quotient constructions.

use petgraph::unionfind::UnionFind;

/// Classes of `uf`, each sorted, ordered by least member.
pub(crate) fn groups(uf: UnionFind<usize>) -> Vec<Vec<usize>> {
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (x, r) in uf.into_labeling().into_iter().enumerate() {
        by_root.entry(r).or_default().push(x);
    }
    let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
    groups.sort_by_key(|g| g[0]);
    groups
}

/// Reflexive-transitive closure of a relation given as an `n x n` matrix.
pub(crate) fn reflexive_transitive_closure(rel: &mut [bool], n: usize) {
    for i in 0..n {
        rel[i * n + i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if rel[i * n + k] {
                for j in 0..n {
                    if rel[k * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
    }
}

/// Calls `visit` for every tuple in the cartesian product of `choices`,
/// stopping early when it returns `false`. Returns whether the walk finished.
pub(crate) fn for_each_product<T: Copy>(choices: &[Vec<T>], mut visit: impl FnMut(&[T]) -> bool) -> bool {
    if choices.iter().any(|c| c.is_empty()) {
        return true;
    }
    let mut idx = vec![0usize; choices.len()];
    let mut current: Vec<T> = choices.iter().map(|c| c[0]).collect();
    loop {
        if !visit(&current) {
            return false;
        }
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                current[pos] = choices[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            current[pos] = choices[pos][0];
        }
    }
}

//! Splitting a body conjunction into the subconjunctions that become new
//! definitions.

use crate::chc::Atom;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PartitionOp {
    /// One atom per subconjunction.
    Singleton,
    /// Pairs, preferring atoms with different provenance tags.
    Pairing,
}

impl PartitionOp {
    /// Largest subconjunction the operator produces.
    pub fn bound(self) -> usize {
        match self {
            PartitionOp::Singleton => 1,
            PartitionOp::Pairing => 2,
        }
    }
}

/// Indices of `atoms` grouped into subconjunctions, ordered by their first
/// index. `tag` gives the provenance tag of a predicate.
pub fn partition(op: PartitionOp, atoms: &[Atom], tag: impl Fn(&str) -> String) -> Vec<Vec<usize>> {
    let n = atoms.len();
    match op {
        PartitionOp::Singleton => (0..n).map(|i| vec![i]).collect(),
        PartitionOp::Pairing => {
            let tags: Vec<String> = atoms.iter().map(|a| tag(&a.pred)).collect();
            let mut used = vec![false; n];
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for i in 0..n {
                if used[i] {
                    continue;
                }
                if let Some(j) = (i + 1..n).find(|&j| !used[j] && tags[j] != tags[i]) {
                    used[i] = true;
                    used[j] = true;
                    groups.push(vec![i, j]);
                }
            }
            let rest: Vec<usize> = (0..n).filter(|i| !used[*i]).collect();
            for chunk in rest.chunks(2) {
                groups.push(chunk.to_vec());
            }
            groups.sort_by_key(|g| g[0]);
            groups
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms(preds: &[&str]) -> Vec<Atom> {
        preds.iter().map(|p| Atom::new(*p, vec![])).collect()
    }

    #[test]
    fn singleton() {
        assert_eq!(
            partition(PartitionOp::Singleton, &atoms(&["a", "b", "c"]), |_| String::new()),
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn pairs_across_provenance() {
        let tag = |p: &str| if p.starts_with("s1") { "g1".to_string() } else { "g2".to_string() };
        assert_eq!(partition(PartitionOp::Pairing, &atoms(&["s12", "s22"]), tag), vec![vec![0, 1]]);
        assert_eq!(
            partition(PartitionOp::Pairing, &atoms(&["s12", "s13", "s22"]), tag),
            vec![vec![0, 2], vec![1]]
        );
    }

    #[test]
    fn same_provenance_pairs_positionally() {
        assert_eq!(
            partition(PartitionOp::Pairing, &atoms(&["a", "b", "c"]), |_| "x".to_string()),
            vec![vec![0, 1], vec![2]]
        );
    }
}

//! Shared plumbing for the solvers: vote pools, restricted agendas, and
//! profiles over edited vote counts.

use crate::election::{Profile, Vote};

use super::ControlInstance;

/// Identical votes merged into one pool.
#[derive(Debug, Clone)]
pub(crate) struct Pool {
    /// Index of the first vote with this order.
    pub rep: usize,
    pub total: u64,
    /// `(vote index, multiplicity)` in index order.
    pub members: Vec<(usize, u64)>,
}

pub(crate) fn pools(votes: &[Vote]) -> Vec<Pool> {
    let mut out: Vec<Pool> = Vec::new();
    for (i, v) in votes.iter().enumerate() {
        match out.iter_mut().find(|p| votes[p.rep].order() == v.order()) {
            Some(p) => {
                p.total += v.multiplicity();
                p.members.push((i, v.multiplicity()));
            }
            None => out.push(Pool {
                rep: i,
                total: v.multiplicity(),
                members: vec![(i, v.multiplicity())],
            }),
        }
    }
    out
}

/// Spreads per-pool counts over the member votes, lowest index first.
pub(crate) fn take(pools: &[Pool], counts: &[u64]) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    for (pool, &want) in pools.iter().zip(counts) {
        let mut left = want;
        for &(i, k) in &pool.members {
            if left == 0 {
                break;
            }
            let t = left.min(k);
            out.push((i, t));
            left -= t;
        }
    }
    out.sort_unstable();
    out
}

/// Profile of the registered votes, unedited.
pub(crate) fn registered_profile(inst: &ControlInstance) -> Profile<'_> {
    Profile::new(
        inst.num_candidates(),
        inst.registered_votes().iter().map(|v| (v.rank(), v.multiplicity())),
    )
}

/// 0-based agenda position of every candidate.
pub(crate) fn agenda_positions(inst: &ControlInstance) -> Vec<usize> {
    let mut pos = vec![0; inst.num_candidates()];
    for (i, &c) in inst.agenda().iter().enumerate() {
        pos[c] = i;
    }
    pos
}

/// All `k`-subsets of `items`, in lexicographic order of positions.
pub(crate) fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// All subsets of `items` with at most `k` elements, smallest first.
pub(crate) fn subsets_up_to(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    (0..=k.min(items.len()))
        .flat_map(|s| subsets_of_size(items, s))
        .collect()
}

/// All vectors `x` with `x[i] <= caps[i]` summing to `total`, in
/// lexicographic order.
pub(crate) fn compositions(caps: &[u64], total: u64) -> Vec<Vec<u64>> {
    fn rec(caps: &[u64], rest: &[u64], left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let i = cur.len();
        if i == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let lo = left.saturating_sub(rest[i + 1]);
        let hi = left.min(caps[i]);
        for x in lo..=hi {
            cur.push(x);
            rec(caps, rest, left - x, cur, out);
            cur.pop();
        }
    }
    // rest[i] = capacity of caps[i..]
    let mut rest = vec![0u64; caps.len() + 1];
    for i in (0..caps.len()).rev() {
        rest[i] = rest[i + 1] + caps[i];
    }
    let mut out = Vec::new();
    if total <= rest[0] {
        rec(caps, &rest, total, &mut Vec::with_capacity(caps.len()), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        let items = [3, 5, 7, 9];
        assert_eq!(subsets_of_size(&items, 2).len(), 6);
        assert_eq!(subsets_up_to(&items, 2).len(), 11);
        assert_eq!(subsets_of_size(&items, 5).len(), 0);
        assert_eq!(subsets_up_to(&items, 2)[0], Vec::<usize>::new());
    }

    #[test]
    fn composition_counts() {
        let c = compositions(&[2, 1, 3], 3);
        assert!(c.iter().all(|x| x.iter().sum::<u64>() == 3));
        assert!(c.iter().all(|x| x[0] <= 2 && x[1] <= 1 && x[2] <= 3));
        let mut brute = 0;
        for a in 0..=2 {
            for b in 0..=1 {
                for d in 0..=3 {
                    if a + b + d == 3 {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(c.len(), brute);
        assert!(compositions(&[1, 1], 3).is_empty());
        assert_eq!(compositions(&[], 0), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn pooling_merges_identical_orders() {
        let v = vec![
            Vote::new(vec![0, 1], 2).unwrap(),
            Vote::new(vec![1, 0], 1).unwrap(),
            Vote::new(vec![0, 1], 3).unwrap(),
        ];
        let p = pools(&v);
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].total, 5);
        assert_eq!(take(&p, &[3, 0]), vec![(0, 2), (2, 1)]);
    }
}

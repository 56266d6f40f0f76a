/// Compositions of `total` into exactly `parts` nonnegative parts, in
/// lexicographic order.
pub fn compositions(total: u32, parts: usize) -> Compositions {
    let current = if parts == 0 {
        (total == 0).then(Vec::new)
    } else {
        let mut c = vec![0; parts];
        c[parts - 1] = total;
        Some(c)
    };
    Compositions { current }
}

pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let p = out.len();
        if p >= 2 {
            let mut tail = out[p - 1];
            let mut i = p - 1;
            // rightmost position with something to its right
            while i > 0 {
                i -= 1;
                if tail > 0 {
                    let mut next = out.clone();
                    next[i] += 1;
                    for x in next.iter_mut().skip(i + 1) {
                        *x = 0;
                    }
                    next[p - 1] = tail - 1;
                    self.current = Some(next);
                    break;
                }
                tail += out[i];
            }
        }
        Some(out)
    }
}

/// Partitions of `total` into at most `max_parts` positive parts, listed
/// as nonincreasing sequences in decreasing lexicographic order.
pub fn partitions(total: u32, max_parts: usize) -> Partitions {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(total, max_parts, total, &mut cur, &mut out);
    Partitions { inner: out.into_iter() }
}

fn fill(rest: u32, slots: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    if slots == 0 {
        return;
    }
    for first in (1..=cap.min(rest)).rev() {
        // the remaining slots must be able to hold what is left
        if (first as u64) * (slots as u64) < rest as u64 {
            break;
        }
        cur.push(first);
        fill(rest - first, slots - 1, first, cur, out);
        cur.pop();
    }
}

pub struct Partitions {
    inner: std::vec::IntoIter<Vec<u32>>,
}

impl Iterator for Partitions {
    type Item = Vec<u32>;
    fn next(&mut self) -> Option<Vec<u32>> {
        self.inner.next()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::binomial;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn small_lists() {
        let c: Vec<_> = compositions(2, 2).collect();
        assert_eq!(c, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let z: Vec<_> = compositions(0, 3).collect();
        assert_eq!(z, vec![vec![0, 0, 0]]);
        assert_eq!(compositions(0, 0).count(), 1);
        assert_eq!(compositions(3, 0).count(), 0);
        let p: Vec<_> = partitions(4, 2).collect();
        assert_eq!(p, vec![vec![4], vec![3, 1], vec![2, 2]]);
        assert_eq!(partitions(0, 0).collect::<Vec<_>>(), vec![Vec::<u32>::new()]);
        assert_eq!(partitions(5, 5).count(), 7);
    }

    proptest! {
        #[test]
        fn composition_count(total in 0u32..9, parts in 1usize..5) {
            let all: Vec<_> = compositions(total, parts).collect();
            let expect = binomial(total + parts as u32 - 1, parts as u32 - 1);
            prop_assert_eq!(BigInt::from(all.len()), expect);
            for w in all.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            prop_assert!(all.iter().all(|c| c.iter().sum::<u32>() == total));
        }

        #[test]
        fn partitions_are_sorted_and_unique(total in 0u32..15, parts in 0usize..6) {
            let all: Vec<_> = partitions(total, parts).collect();
            for p in &all {
                prop_assert!(p.len() <= parts);
                prop_assert_eq!(p.iter().sum::<u32>(), total);
                prop_assert!(p.windows(2).all(|w| w[0] >= w[1]));
            }
            for w in all.windows(2) {
                prop_assert!(w[0] > w[1]);
            }
        }
    }
}

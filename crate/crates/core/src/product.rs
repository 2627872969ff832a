use crate::model::Value;

/// Lexicographic enumeration of the cartesian product of value ranges.
///
/// The last position varies fastest. An empty list of ranges yields exactly one
/// empty tuple; any empty range yields nothing.
pub(crate) struct Odometer<'a> {
    ranges: Vec<&'a [Value]>,
    idx: Vec<usize>,
    done: bool,
}

impl<'a> Odometer<'a> {
    pub(crate) fn new(ranges: Vec<&'a [Value]>) -> Self {
        let done = ranges.iter().any(|r| r.is_empty());
        let idx = vec![0; ranges.len()];
        Odometer { ranges, idx, done }
    }
}

impl Iterator for Odometer<'_> {
    type Item = Vec<Value>;

    fn next(&mut self) -> Option<Vec<Value>> {
        if self.done {
            return None;
        }
        let item = self.idx.iter().zip(&self.ranges).map(|(&i, r)| r[i]).collect();
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < self.ranges[pos].len() {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(item)
    }
}

/// Size of the product, saturating.
pub(crate) fn product_size<'a>(ranges: impl IntoIterator<Item = &'a [Value]>) -> u128 {
    ranges.into_iter().fold(1u128, |acc, r| acc.saturating_mul(r.len() as u128))
}

/// All subsets of `0..n` of size `k`, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

//! A fixed enumeration of all finite nonempty sets of nonempty words:
//! by total length, then lexicographically on the sorted word list.

use crate::power::WordSet;
use crate::word::{enumerate_words, Word};

/// Every set of total length `total`, in enumeration order.
pub fn sets_of_total_length(total: u32) -> Vec<WordSet> {
    let words: Vec<Word> = (1..=total).flat_map(|l| enumerate_words(l).expect("short words")).collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    extend(&words, 0, total, &mut stack, &mut out);
    out
}

// Depth-first over strictly increasing word lists: taking the first word in
// increasing order yields the lists already sorted lexicographically.
fn extend(words: &[Word], from: usize, left: u32, stack: &mut Vec<Word>, out: &mut Vec<WordSet>) {
    if left == 0 {
        out.push(WordSet::new(stack.clone()).expect("distinct nonempty words"));
        return;
    }
    for (i, w) in words.iter().enumerate().skip(from) {
        if w.len() > left {
            break;
        }
        stack.push(*w);
        extend(words, i + 1, left - w.len(), stack, out);
        stack.pop();
    }
}

/// Sets in enumeration order, starting at `S_1`.
pub fn set_iter() -> impl Iterator<Item = WordSet> {
    (1u32..).flat_map(sets_of_total_length)
}

/// `S_i` for `i >= 1`.
pub fn enumerate_sets(i: usize) -> WordSet {
    assert!(i >= 1, "sets are numbered from 1");
    set_iter().nth(i - 1).expect("the enumeration is infinite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn first_sets() {
        let got: Vec<String> = set_iter().take(7).map(|s| s.to_string()).collect();
        assert_eq!(got, ["{x}", "{y}", "{x,y}", "{xx}", "{xy}", "{yx}", "{yy}"]);
        assert_eq!(enumerate_sets(1).to_string(), "{x}");
        assert_eq!(enumerate_sets(3).to_string(), "{x,y}");
    }

    #[test]
    fn counts_by_total_length() {
        // Independent count: subsets of {words of length <= t} with total length t.
        for t in 1..=6u32 {
            let words: Vec<u32> = (1..=t).flat_map(|l| std::iter::repeat_n(l, 1 << l)).collect();
            let mut ways = vec![0u64; t as usize + 1];
            ways[0] = 1;
            for &l in &words {
                for s in (l as usize..=t as usize).rev() {
                    ways[s] += ways[s - l as usize];
                }
            }
            assert_eq!(sets_of_total_length(t).len() as u64, ways[t as usize], "t={t}");
        }
    }

    #[test]
    fn no_duplicates_and_sorted() {
        let first: Vec<WordSet> = set_iter().take(10_000).collect();
        let uniq: BTreeSet<&WordSet> = first.iter().collect();
        assert_eq!(uniq.len(), first.len());
        for w in first.windows(2) {
            let key = |s: &WordSet| (s.total_len(), s.words().to_vec());
            assert!(key(&w[0]) < key(&w[1]));
        }
    }
}

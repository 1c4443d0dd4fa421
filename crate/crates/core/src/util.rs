/// All `k`-tuples over `0..n` in lexicographic order. Yields exactly one
/// empty tuple when `k == 0`.
pub fn index_tuples(n: usize, k: usize) -> IndexTuples {
    IndexTuples {
        n,
        current: if k > 0 && n == 0 {
            None
        } else {
            Some(vec![0; k])
        },
    }
}

pub struct IndexTuples {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for IndexTuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        for i in (0..next.len()).rev() {
            next[i] += 1;
            if next[i] < self.n {
                self.current = Some(next);
                return Some(out);
            }
            next[i] = 0;
        }
        Some(out)
    }
}

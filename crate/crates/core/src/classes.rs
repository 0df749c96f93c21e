//! World-vertex classes that only ever merge while the search descends and
//! split again on backtrack.
//!
//! Union by size without path compression keeps `find` logarithmic and
//! every union undoable. Members of a class form a circular linked list
//! through `next`; swapping the `next` pointers of two roots splices two
//! cycles together, and swapping them again splits them back.

#[derive(Debug, Clone)]
pub(crate) struct DynamicClasses {
    parent: Vec<usize>,
    size: Vec<usize>,
    next: Vec<usize>,
    history: Vec<(usize, usize)>,
}

impl DynamicClasses {
    pub(crate) fn singletons(n: usize) -> Self {
        DynamicClasses { parent: (0..n).collect(), size: vec![1; n], next: (0..n).collect(), history: Vec::new() }
    }

    pub(crate) fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.next.swap(ra, rb);
        self.history.push((ra, rb));
        true
    }

    pub(crate) fn checkpoint(&self) -> usize {
        self.history.len()
    }

    pub(crate) fn rollback(&mut self, checkpoint: usize) {
        while self.history.len() > checkpoint {
            let (ra, rb) = self.history.pop().unwrap();
            self.next.swap(ra, rb);
            self.size[ra] -= self.size[rb];
            self.parent[rb] = rb;
        }
    }

    #[cfg(test)]
    pub(crate) fn size_of(&self, x: usize) -> usize {
        self.size[self.find(x)]
    }

    /// Sorted members of the class containing `x`.
    pub(crate) fn members(&self, x: usize) -> Vec<usize> {
        let mut out = vec![x];
        let mut y = self.next[x];
        while y != x {
            out.push(y);
            y = self.next[y];
        }
        out.sort_unstable();
        out
    }
}

/// Union-find with union by size and an undo log. No path compression, so
/// every union can be rolled back in O(1).
#[derive(Debug, Clone)]
pub struct RollbackDsu {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
    // (absorbed root, previous size of surviving root); None for no-op unions
    history: Vec<Option<(u32, u32)>>,
}

impl RollbackDsu {
    pub fn new(n: usize) -> Self {
        RollbackDsu { parent: (0..n as u32).collect(), size: vec![1; n], components: n, history: Vec::new() }
    }

    pub fn find(&self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    /// Joins the classes of `a` and `b`; always pushes one history entry.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.history.push(None);
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.history.push(Some((rb, self.size[ra as usize])));
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.components -= 1;
        true
    }

    /// Pushes a history entry without touching the partition, so callers can
    /// pair every step with exactly one `rollback`.
    pub fn mark(&mut self) {
        self.history.push(None);
    }

    pub fn rollback(&mut self) {
        match self.history.pop() {
            Some(Some((child, old_size))) => {
                let root = self.parent[child as usize];
                self.size[root as usize] = old_size;
                self.parent[child as usize] = child;
                self.components += 1;
            }
            Some(None) => {}
            None => panic!("rollback on empty history"),
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

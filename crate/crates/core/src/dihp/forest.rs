use serde::Serialize;

/// Result of offering an edge to a [`Forest`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Insert {
    /// The edge joined two components and was added.
    Joined,
    /// Both endpoints were already connected; the edge was not added.
    /// `label_sum` is the parity of the labels around the closed cycle.
    Cycle { label_sum: bool },
}

/// Labeled spanning forest over `[n]`.
///
/// Union-find with parity to the parent, component sizes at roots and a
/// circular successor list per component (so components can be listed and
/// evicted). The potential `‖F‖ = Σ_{|C|≥2} |C|²` is kept incrementally.
#[derive(Clone, Debug)]
pub struct Forest {
    parent: Vec<u32>,
    parity: Vec<bool>,
    size: Vec<u32>,
    next: Vec<u32>,
    edges: Vec<(u32, u32, bool)>,
    potential: u64,
}

fn sq(x: u32) -> u64 {
    if x >= 2 {
        x as u64 * x as u64
    } else {
        0
    }
}

impl Forest {
    pub fn new(n: u32) -> Self {
        Self {
            parent: (0..n).collect(),
            parity: vec![false; n as usize],
            size: vec![1; n as usize],
            next: (0..n).collect(),
            edges: Vec::new(),
            potential: 0,
        }
    }

    pub fn n(&self) -> u32 {
        self.parent.len() as u32
    }

    /// Root of `v` and the label parity along the path from `v` to it.
    pub fn find(&mut self, v: u32) -> (u32, bool) {
        let mut path_parity = false;
        let mut root = v;
        while self.parent[root as usize] != root {
            path_parity ^= self.parity[root as usize];
            root = self.parent[root as usize];
        }
        // Path compression, keeping parities relative to the root.
        let mut cur = v;
        let mut acc = path_parity;
        while self.parent[cur as usize] != root && cur != root {
            let up = self.parent[cur as usize];
            let here = self.parity[cur as usize];
            self.parent[cur as usize] = root;
            self.parity[cur as usize] = acc;
            acc ^= here;
            cur = up;
        }
        (root, path_parity)
    }

    /// Root without compression.
    pub fn root(&self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            v = self.parent[v as usize];
        }
        v
    }

    pub fn component_size(&self, v: u32) -> u32 {
        self.size[self.root(v) as usize]
    }

    /// Whether `v` lies in a component with at least two vertices.
    pub fn in_component(&self, v: u32) -> bool {
        self.component_size(v) >= 2
    }

    pub fn connected(&self, a: u32, b: u32) -> bool {
        self.root(a) == self.root(b)
    }

    pub fn insert(&mut self, a: u32, b: u32, label: bool) -> Insert {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return Insert::Cycle { label_sum: pa ^ pb ^ label };
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] { (ra, rb) } else { (rb, ra) };
        let (sb, ss) = (self.size[big as usize], self.size[small as usize]);
        self.potential = self.potential + sq(sb + ss) - sq(sb) - sq(ss);
        self.parent[small as usize] = big;
        self.parity[small as usize] = pa ^ pb ^ label;
        self.size[big as usize] = sb + ss;
        self.next.swap(big as usize, small as usize);
        self.edges.push((a, b, label));
        Insert::Joined
    }

    pub fn potential(&self) -> u64 {
        self.potential
    }

    pub fn edges(&self) -> &[(u32, u32, bool)] {
        &self.edges
    }

    /// Vertices of the component containing `v`, starting at `v`.
    pub fn members(&self, v: u32) -> Vec<u32> {
        let mut out = vec![v];
        let mut cur = self.next[v as usize];
        while cur != v {
            out.push(cur);
            cur = self.next[cur as usize];
        }
        out
    }

    /// Roots of all components with at least two vertices, ascending.
    pub fn nontrivial_roots(&self) -> Vec<u32> {
        (0..self.n()).filter(|&v| self.parent[v as usize] == v && self.size[v as usize] >= 2).collect()
    }

    /// Sizes of components with at least two vertices, ordered by root.
    pub fn component_sizes(&self) -> Vec<u32> {
        self.nontrivial_roots().iter().map(|&r| self.size[r as usize]).collect()
    }

    /// Total number of vertices in nontrivial components.
    pub fn covered(&self) -> u64 {
        self.component_sizes().iter().map(|&s| s as u64).sum()
    }

    /// Remove the whole component of `v`, returning its vertices to
    /// singletons and dropping its edges.
    pub fn evict(&mut self, v: u32) {
        let root = self.root(v);
        self.potential -= sq(self.size[root as usize]);
        let edges = std::mem::take(&mut self.edges);
        self.edges = edges.into_iter().filter(|&(a, _, _)| self.root(a) != root).collect();
        for u in self.members(v) {
            self.parent[u as usize] = u;
            self.parity[u as usize] = false;
            self.size[u as usize] = 1;
            self.next[u as usize] = u;
        }
    }

    /// `‖F‖` recomputed from the edge list alone.
    pub fn potential_from_scratch(&self) -> u64 {
        let n = self.n() as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn top(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        for &(a, b, _) in &self.edges {
            let (ra, rb) = (top(&mut parent, a as usize), top(&mut parent, b as usize));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut sizes = vec![0u32; n];
        for v in 0..n {
            let r = top(&mut parent, v);
            sizes[r] += 1;
        }
        sizes.into_iter().map(sq).sum()
    }
}

/// `Σ |C|²` over components of size at least two.
pub fn forest_potential(f: &Forest) -> u64 {
    f.potential()
}

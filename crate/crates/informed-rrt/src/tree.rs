//! Search tree for RRT*-style planners: append-only vertex storage with
//! an alive mask, parent/child links, cached root costs and the
//! neighborhood queries the rewiring step needs.
//!
//! Vertex indices are stable for the lifetime of the tree; pruning
//! marks vertices dead instead of reusing slots, so audit trails and
//! solution bookkeeping can hold indices safely.

use crate::State;

#[derive(Debug, Clone)]
pub struct Tree {
    states: Vec<State>,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    edge_cost: Vec<f64>,
    cost: Vec<f64>,
    alive: Vec<bool>,
    live_count: usize,
}

pub const ROOT: usize = 0;

impl Tree {
    pub fn new(root: State) -> Self {
        Tree {
            states: vec![root],
            parent: vec![ROOT],
            children: vec![Vec::new()],
            edge_cost: vec![0.0],
            cost: vec![0.0],
            alive: vec![true],
            live_count: 1,
        }
    }

    /// Total slots ever allocated, dead ones included.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of live vertices.
    pub fn live_count(&self) -> usize {
        self.live_count
    }

    pub fn is_live(&self, v: usize) -> bool {
        self.alive[v]
    }

    pub fn state(&self, v: usize) -> &State {
        &self.states[v]
    }

    /// Cost-to-come from the root along tree edges.
    pub fn cost(&self, v: usize) -> f64 {
        self.cost[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        if v == ROOT {
            None
        } else {
            Some(self.parent[v])
        }
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| self.alive[v])
    }

    /// Appends a vertex under `parent`; returns its index.
    pub fn insert(&mut self, state: State, parent: usize, edge_cost: f64) -> usize {
        assert!(self.alive[parent], "parent must be live");
        assert!(edge_cost.is_finite() && edge_cost >= 0.0);
        let v = self.states.len();
        self.states.push(state);
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.edge_cost.push(edge_cost);
        self.cost.push(self.cost[parent] + edge_cost);
        self.alive.push(true);
        self.children[parent].push(v);
        self.live_count += 1;
        v
    }

    /// Moves `v` under `new_parent` and refreshes the cached costs of
    /// `v` and all its descendants.
    pub fn reparent(&mut self, v: usize, new_parent: usize, edge_cost: f64) {
        assert!(v != ROOT, "cannot reparent the root");
        assert!(self.alive[v] && self.alive[new_parent]);
        assert!(edge_cost.is_finite() && edge_cost >= 0.0);
        debug_assert!(
            !self.is_ancestor(v, new_parent),
            "reparenting under a descendant would create a cycle"
        );
        let old = self.parent[v];
        let slot = self.children[old]
            .iter()
            .position(|&c| c == v)
            .expect("child link consistent");
        self.children[old].swap_remove(slot);
        self.children[new_parent].push(v);
        self.parent[v] = new_parent;
        self.edge_cost[v] = edge_cost;
        self.refresh_costs(v);
    }

    fn is_ancestor(&self, candidate: usize, mut v: usize) -> bool {
        loop {
            if v == candidate {
                return true;
            }
            if v == ROOT {
                return false;
            }
            v = self.parent[v];
        }
    }

    fn refresh_costs(&mut self, from: usize) {
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            self.cost[v] = self.cost[self.parent[v]] + self.edge_cost[v];
            stack.extend_from_slice(&self.children[v]);
        }
    }

    /// Marks a childless non-root vertex dead and unlinks it.
    pub fn remove_leaf(&mut self, v: usize) {
        assert!(v != ROOT, "cannot remove the root");
        assert!(self.alive[v], "vertex already dead");
        assert!(self.children[v].is_empty(), "vertex still has children");
        let p = self.parent[v];
        let slot = self.children[p]
            .iter()
            .position(|&c| c == v)
            .expect("child link consistent");
        self.children[p].swap_remove(slot);
        self.alive[v] = false;
        self.live_count -= 1;
    }

    /// Live vertex closest to `x` in Euclidean distance, lowest index
    /// on ties.
    pub fn nearest(&self, x: &State) -> usize {
        let mut best = usize::MAX;
        let mut best_dist = f64::INFINITY;
        for v in 0..self.len() {
            if !self.alive[v] {
                continue;
            }
            let d = (x - &self.states[v]).norm();
            if d < best_dist {
                best_dist = d;
                best = v;
            }
        }
        assert!(best != usize::MAX, "tree has no live vertices");
        best
    }

    /// Live vertices within distance `radius` of `x`, ascending index.
    pub fn near_radius(&self, x: &State, radius: f64) -> Vec<usize> {
        self.live_vertices()
            .filter(|&v| (x - &self.states[v]).norm() <= radius)
            .collect()
    }

    /// The `k` live vertices closest to `x`, ordered by distance with
    /// lowest index on ties. Returns all live vertices when fewer than
    /// `k` exist.
    pub fn near_k(&self, x: &State, k: usize) -> Vec<usize> {
        let mut by_dist: Vec<(f64, usize)> = self
            .live_vertices()
            .map(|v| ((x - &self.states[v]).norm(), v))
            .collect();
        by_dist.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        by_dist.truncate(k);
        by_dist.into_iter().map(|(_, v)| v).collect()
    }

    /// Vertex indices from the root to `v` inclusive.
    pub fn path_from_root(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while cur != ROOT {
            cur = self.parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::state;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn chain() -> Tree {
        let mut t = Tree::new(state(&[0.0, 0.0]));
        let a = t.insert(state(&[1.0, 0.0]), ROOT, 1.0);
        let b = t.insert(state(&[2.0, 0.0]), a, 1.0);
        t.insert(state(&[3.0, 0.0]), b, 1.0);
        t
    }

    fn audit(t: &Tree) {
        for v in t.live_vertices() {
            if v != ROOT {
                let p = t.parent(v).unwrap();
                assert!(t.is_live(p), "live vertex {v} has dead parent");
                assert!(t.children(p).contains(&v));
                assert_relative_eq!(
                    t.cost(v),
                    t.cost(p) + t.edge_cost[v],
                    max_relative = 1e-12
                );
            }
            for &c in t.children(v) {
                assert_eq!(t.parent(c).unwrap(), v);
                assert!(t.is_live(c));
            }
        }
    }

    #[test]
    fn insert_accumulates_cost() {
        let t = chain();
        assert_eq!(t.live_count(), 4);
        assert_relative_eq!(t.cost(3), 3.0);
        assert_eq!(t.path_from_root(3), vec![0, 1, 2, 3]);
        audit(&t);
    }

    #[test]
    fn reparent_updates_descendants() {
        let mut t = chain();
        let shortcut = t.insert(state(&[2.0, 0.1]), ROOT, 0.5);
        t.reparent(2, shortcut, 0.1);
        assert_relative_eq!(t.cost(2), 0.6);
        assert_relative_eq!(t.cost(3), 1.6);
        assert_eq!(t.parent(2), Some(shortcut));
        audit(&t);
    }

    #[test]
    fn remove_leaf_unlinks() {
        let mut t = chain();
        t.remove_leaf(3);
        assert!(!t.is_live(3));
        assert_eq!(t.live_count(), 3);
        assert!(t.is_leaf(2));
        assert_eq!(t.len(), 4, "slots are never reused");
        audit(&t);
    }

    #[test]
    #[should_panic(expected = "still has children")]
    fn remove_inner_vertex_panics() {
        let mut t = chain();
        t.remove_leaf(1);
    }

    #[test]
    fn nearest_prefers_lowest_index_on_ties() {
        let mut t = Tree::new(state(&[0.0, 0.0]));
        let a = t.insert(state(&[1.0, 1.0]), ROOT, 2f64.sqrt());
        let b = t.insert(state(&[1.0, 1.0]), ROOT, 2f64.sqrt());
        assert_eq!(t.nearest(&state(&[1.0, 1.0])), a);
        assert!(b > a);
        t.remove_leaf(a);
        assert_eq!(t.nearest(&state(&[1.0, 1.0])), b, "dead vertices are skipped");
    }

    #[test]
    fn neighborhoods_match_brute_force() {
        let mut t = Tree::new(state(&[0.0, 0.0]));
        let mut rng = RngStream::from_seed(33);
        let mut points = vec![state(&[0.0, 0.0])];
        for _ in 0..200 {
            let p = state(&[rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
            let parent = rng.random_range(0..t.len());
            if t.is_live(parent) {
                let d = (&p - t.state(parent)).norm();
                t.insert(p.clone(), parent, d);
                points.push(p);
            }
        }
        let query = state(&[0.1, -0.2]);
        let mut expected: Vec<(f64, usize)> = t
            .live_vertices()
            .map(|v| ((&query - t.state(v)).norm(), v))
            .collect();
        expected.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        assert_eq!(t.nearest(&query), expected[0].1);
        let k = 17;
        let got = t.near_k(&query, k);
        let want: Vec<usize> = expected.iter().take(k).map(|&(_, v)| v).collect();
        assert_eq!(got, want);

        let r = 0.5;
        let got = t.near_radius(&query, r);
        let want: Vec<usize> = t
            .live_vertices()
            .filter(|&v| (&query - t.state(v)).norm() <= r)
            .collect();
        assert_eq!(got, want);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_edits_keep_links_and_costs_consistent(seed in 0u64..1000) {
            let mut rng = RngStream::from_seed(seed);
            let mut t = Tree::new(state(&[0.0, 0.0]));
            for _ in 0..100 {
                match rng.random_range(0..3u32) {
                    0 => {
                        let parent = rng.random_range(0..t.len());
                        if t.is_live(parent) {
                            let p = state(&[
                                rng.random_range(-1.0..1.0),
                                rng.random_range(-1.0..1.0),
                            ]);
                            let d = (&p - t.state(parent)).norm();
                            t.insert(p, parent, d);
                        }
                    }
                    1 => {
                        let v = rng.random_range(0..t.len());
                        let p = rng.random_range(0..t.len());
                        if v != ROOT
                            && t.is_live(v)
                            && t.is_live(p)
                            && v != p
                            && !t.path_from_root(p).contains(&v)
                        {
                            let d = (t.state(v) - t.state(p)).norm();
                            t.reparent(v, p, d);
                        }
                    }
                    _ => {
                        let v = rng.random_range(0..t.len());
                        if v != ROOT && t.is_live(v) && t.is_leaf(v) {
                            t.remove_leaf(v);
                        }
                    }
                }
            }
            audit(&t);
        }
    }
}

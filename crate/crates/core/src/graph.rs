//! The underlying symmetric digraph `(X, E)`.
//!
//! Every graph is finite. A `lattice-z(k, [a, b])` graph is a window onto
//! `(ℤ, 𝔼_k)` and carries `is_window_of_infinite`; distances inside such a
//! window coincide with the infinite-lattice distance `⌈|i - j| / k⌉`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::rational::Scalar;
use crate::state::Symmetry;

pub type Site = i64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Explicit,
    Path(usize),
    Cycle(usize),
    LatticeZ { k: u64, window: (Site, Site) },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteGraph {
    kind: GraphKind,
    vertices: Vec<Site>,
    names: Option<Vec<String>>,
    adjacency: BTreeMap<Site, Vec<Site>>,
}

/// Distance in the infinite lattice `(ℤ, 𝔼_k)`.
pub fn lattice_distance(k: u64, i: Site, j: Site) -> u64 {
    i.abs_diff(j).div_ceil(k)
}

impl SiteGraph {
    fn from_parts(kind: GraphKind, vertices: Vec<Site>, names: Option<Vec<String>>, edges: BTreeSet<(Site, Site)>) -> Self {
        let mut adjacency: BTreeMap<Site, Vec<Site>> = vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (x, y) in edges {
            adjacency.get_mut(&x).expect("edge endpoint is a vertex").push(y);
        }
        SiteGraph { kind, vertices, names, adjacency }
    }

    /// A finite graph on named vertices. Site ids are the declaration indices.
    pub fn explicit<S: AsRef<str>>(names: &[S], edges: &[(S, S)], symmetry: Symmetry) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut index = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i as Site).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex {n:?}")));
            }
        }
        let lookup = |n: &str| index.get(n).copied().ok_or_else(|| Error::UnknownVertex(n.to_string()));
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let (x, y) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if x == y {
                return Err(Error::InvalidGraph(format!("self loop at {:?}", a.as_ref())));
            }
            set.insert((x, y));
        }
        let missing: Vec<(Site, Site)> = set.iter().filter(|(x, y)| !set.contains(&(*y, *x))).copied().collect();
        if let Some(&(x, y)) = missing.first() {
            if symmetry == Symmetry::Strict {
                return Err(Error::Asymmetric(format!("{} -> {}", names[x as usize], names[y as usize])));
            }
        }
        set.extend(missing.into_iter().map(|(x, y)| (y, x)));
        let vertices = (0..names.len() as Site).collect();
        let g = Self::from_parts(GraphKind::Explicit, vertices, Some(names), set);
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Sites `0..n` joined in a line.
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("path needs at least one vertex".into()));
        }
        let n64 = n as Site;
        let edges = (0..n64 - 1).flat_map(|i| [(i, i + 1), (i + 1, i)]).collect();
        Ok(Self::from_parts(GraphKind::Path(n), (0..n64).collect(), None, edges))
    }

    /// Sites `0..n` joined in a ring; `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph("cycle needs at least three vertices".into()));
        }
        let n64 = n as Site;
        let edges = (0..n64).flat_map(|i| [(i, (i + 1) % n64), ((i + 1) % n64, i)]).collect();
        Ok(Self::from_parts(GraphKind::Cycle(n), (0..n64).collect(), None, edges))
    }

    /// The window `[a, b]` of `(ℤ, 𝔼_k)`.
    pub fn lattice_z(k: u64, a: Site, b: Site) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidGraph("lattice range k must be positive".into()));
        }
        if a > b {
            return Err(Error::InvalidGraph(format!("empty window [{a}, {b}]")));
        }
        let mut edges = BTreeSet::new();
        for i in a..=b {
            for d in 1..=k as Site {
                if i + d <= b {
                    edges.insert((i, i + d));
                    edges.insert((i + d, i));
                }
            }
        }
        Ok(Self::from_parts(GraphKind::LatticeZ { k, window: (a, b) }, (a..=b).collect(), None, edges))
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn is_window_of_infinite(&self) -> bool {
        matches!(self.kind, GraphKind::LatticeZ { .. })
    }

    pub fn lattice_range(&self) -> Option<u64> {
        match self.kind {
            GraphKind::LatticeZ { k, .. } => Some(k),
            _ => None,
        }
    }

    pub fn window(&self) -> Option<(Site, Site)> {
        match self.kind {
            GraphKind::LatticeZ { window, .. } => Some(window),
            _ => None,
        }
    }

    pub fn vertices(&self) -> &[Site] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, x: Site) -> bool {
        self.adjacency.contains_key(&x)
    }

    pub fn check(&self, x: Site) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(self.site_label(x)))
        }
    }

    pub fn neighbors(&self, x: Site) -> &[Site] {
        self.adjacency.get(&x).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains_edge(&self, x: Site, y: Site) -> bool {
        self.neighbors(x).binary_search(&y).is_ok()
    }

    /// Directed edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Site, Site)> + '_ {
        self.adjacency.iter().flat_map(|(&x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    pub fn site_label(&self, x: Site) -> String {
        match &self.names {
            Some(names) if x >= 0 && (x as usize) < names.len() => names[x as usize].clone(),
            _ => x.to_string(),
        }
    }

    pub fn parse_site(&self, label: &str) -> Result<Site> {
        let site = match &self.names {
            Some(names) => names.iter().position(|n| n == label).map(|i| i as Site),
            None => label.trim().parse().ok(),
        };
        match site {
            Some(s) if self.contains(s) => Ok(s),
            _ => Err(Error::UnknownVertex(label.to_string())),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.first() else { return true };
        self.bfs_distances(start).len() == self.vertices.len()
    }

    /// Breadth-first distances from `x` to every reachable vertex.
    pub fn bfs_distances(&self, x: Site) -> BTreeMap<Site, u64> {
        let mut dist = BTreeMap::from([(x, 0u64)]);
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            for &v in self.neighbors(u) {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(v) {
                    e.insert(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, x: Site, y: Site) -> Result<u64> {
        self.check(x)?;
        self.check(y)?;
        Ok(match self.kind {
            GraphKind::Path(_) => x.abs_diff(y),
            GraphKind::Cycle(n) => {
                let d = x.abs_diff(y);
                d.min(n as u64 - d)
            }
            GraphKind::LatticeZ { k, .. } => lattice_distance(k, x, y),
            GraphKind::Explicit => self.bfs_distances(x)[&y],
        })
    }

    /// `B(x, R) = { y : d(x, y) < R }`.
    pub fn ball(&self, x: Site, radius: &Scalar) -> Result<BTreeSet<Site>> {
        self.check(x)?;
        let mut out = BTreeSet::new();
        for &y in &self.vertices {
            let d = BigRational::from_integer(self.distance(x, y)?.into());
            if &d < radius {
                out.insert(y);
            }
        }
        Ok(out)
    }

    /// Maximum pairwise distance; 0 for the empty set.
    pub fn diameter_of<'a>(&self, sites: impl IntoIterator<Item = &'a Site>) -> Result<u64> {
        let sites: Vec<Site> = sites.into_iter().copied().collect();
        for &s in &sites {
            self.check(s)?;
        }
        let mut best = 0;
        for (i, &x) in sites.iter().enumerate() {
            for &y in &sites[i + 1..] {
                best = best.max(self.distance(x, y)?);
            }
        }
        Ok(best)
    }

    /// A shortest vertex path from `x` to `y`, ties broken toward smaller neighbours.
    pub fn shortest_path(&self, x: Site, y: Site) -> Result<Vec<Site>> {
        self.check(x)?;
        self.check(y)?;
        let mut prev: BTreeMap<Site, Site> = BTreeMap::new();
        let mut seen = BTreeSet::from([x]);
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            if u == y {
                break;
            }
            for &v in self.neighbors(u) {
                if seen.insert(v) {
                    prev.insert(v, u);
                    queue.push_back(v);
                }
            }
        }
        if !seen.contains(&y) {
            return Err(Error::Disconnected);
        }
        let mut path = vec![y];
        let mut cur = y;
        while let Some(&p) = prev.get(&cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Ok(path)
    }
}

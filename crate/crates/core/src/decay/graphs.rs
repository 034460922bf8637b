use super::DecayError;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 6;

/// Edge from `source` to `range`, with `source < range`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub range: usize,
}

/// All connected labeled simple graphs on `vertex_count` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSet {
    pub vertex_count: usize,
    pub graphs: Vec<Vec<Edge>>,
}

impl GraphSet {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

fn connected(k: usize, edges: &[Edge]) -> bool {
    let mut parent: Vec<usize> = (0..k).collect();
    let mut components = k;
    for e in edges {
        let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.range));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components == 1
}

/// Brute force over every subset of the `k (k - 1) / 2` possible edges.
pub fn enumerate_connected_graphs(k: usize) -> Result<GraphSet, DecayError> {
    if !(2..=MAX_VERTICES).contains(&k) {
        return Err(DecayError::UnsupportedVertexCount { k, max: MAX_VERTICES });
    }
    let all: Vec<Edge> = (0..k)
        .flat_map(|s| (s + 1..k).map(move |r| Edge { source: s, range: r }))
        .collect();
    let mut graphs = Vec::new();
    for mask in 1u32..(1u32 << all.len()) {
        let edges: Vec<Edge> = all
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        if edges.len() >= k - 1 && connected(k, &edges) {
            graphs.push(edges);
        }
    }
    Ok(GraphSet { vertex_count: k, graphs })
}

//! Better-response improvement graphs.

use petgraph::algo::{is_cyclic_directed, toposort};
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::{Bfs, Reversed};
use petgraph::Direction;

use crate::families::DEFAULT_CELL_CAP;
use crate::game::{JointStrategy, NormalForm, Orientation, Profiles};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynamicsError {
    #[error("game has {cells} profiles, above the cap of {cap}")]
    ExplosionGuard { cells: u128, cap: u128 },
}

/// Nodes are joint strategies in lexicographic order; an edge labelled `i`
/// joins `s` to `(s'_i, s_{−i})` when player `i` strictly gains.
#[derive(Debug, Clone)]
pub struct ImprovementGraph {
    profiles: Vec<JointStrategy>,
    graph: DiGraph<(), usize>,
}

impl ImprovementGraph {
    pub fn profiles(&self) -> &[JointStrategy] {
        &self.profiles
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// `(from, to, player)` triples as indices into [`profiles`](Self::profiles).
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        self.graph
            .raw_edges()
            .iter()
            .map(|e| (e.source().index(), e.target().index(), e.weight))
            .collect()
    }

    /// Nodes without outgoing edges, which are exactly the pure Nash equilibria.
    pub fn sinks(&self) -> Vec<JointStrategy> {
        self.graph
            .node_indices()
            .filter(|&v| self.is_sink(v))
            .map(|v| self.profiles[v.index()].clone())
            .collect()
    }

    fn is_sink(&self, v: NodeIndex) -> bool {
        self.graph.neighbors_directed(v, Direction::Outgoing).next().is_none()
    }

    /// Finite improvement property: no improvement cycle.
    pub fn has_fip(&self) -> bool {
        !is_cyclic_directed(&self.graph)
    }

    /// Whether a sink is reachable from every node.
    pub fn is_weakly_acyclic(&self) -> bool {
        let reversed = Reversed(&self.graph);
        let mut reached = vec![false; self.graph.node_count()];
        for sink in self.graph.node_indices().filter(|&v| self.is_sink(v)) {
            if reached[sink.index()] {
                continue;
            }
            let mut bfs = Bfs::new(reversed, sink);
            while let Some(v) = bfs.next(reversed) {
                reached[v.index()] = true;
            }
        }
        reached.iter().all(|&r| r)
    }

    /// A potential aligned with [`profiles`](Self::profiles) that strictly
    /// increases along every edge, when the graph is acyclic. Each value is the
    /// length of the longest improvement path ending at that node.
    pub fn potential(&self) -> Option<Vec<u64>> {
        let order = toposort(&self.graph, None).ok()?;
        let mut layer = vec![0u64; self.graph.node_count()];
        for v in order {
            let next = layer[v.index()] + 1;
            for w in self.graph.neighbors_directed(v, Direction::Outgoing) {
                layer[w.index()] = layer[w.index()].max(next);
            }
        }
        Some(layer)
    }
}

pub fn improvement_graph<G: NormalForm + ?Sized>(game: &G) -> Result<ImprovementGraph, DynamicsError> {
    improvement_graph_with_cap(game, DEFAULT_CELL_CAP)
}

pub fn improvement_graph_with_cap<G: NormalForm + ?Sized>(
    game: &G,
    cap: u128,
) -> Result<ImprovementGraph, DynamicsError> {
    let cells = game.profile_count();
    if cells > cap {
        return Err(DynamicsError::ExplosionGuard { cells, cap });
    }
    let counts = game.strategy_counts().to_vec();
    let profiles: Vec<JointStrategy> = Profiles::new(&counts).collect();
    let mut graph = DiGraph::with_capacity(profiles.len(), 0);
    for _ in &profiles {
        graph.add_node(());
    }
    let sign = |v: G::Value| match game.orientation() {
        Orientation::PayoffMax => v,
        Orientation::CostMin => -v,
    };
    let mut values = Vec::with_capacity(counts.len());
    for (from, s) in profiles.iter().enumerate() {
        game.values_at(s.indices(), &mut values);
        let mut probe = s.0.clone();
        for (player, &count) in counts.iter().enumerate() {
            let current = sign(values[player].clone());
            for alt in (0..count).filter(|&a| a != s.0[player]) {
                probe[player] = alt;
                if sign(game.value_of(&probe, player)) > current {
                    let to = rank(&counts, &probe);
                    graph.add_edge(NodeIndex::new(from), NodeIndex::new(to), player);
                }
            }
            probe[player] = s.0[player];
        }
    }
    Ok(ImprovementGraph { profiles, graph })
}

/// Position of `profile` in lexicographic order.
fn rank(counts: &[usize], profile: &[usize]) -> usize {
    profile.iter().zip(counts).fold(0, |acc, (&k, &c)| acc * c + k)
}

pub fn has_fip<G: NormalForm + ?Sized>(game: &G) -> Result<bool, DynamicsError> {
    Ok(improvement_graph(game)?.has_fip())
}

pub fn is_weakly_acyclic<G: NormalForm + ?Sized>(game: &G) -> Result<bool, DynamicsError> {
    Ok(improvement_graph(game)?.is_weakly_acyclic())
}

/// Potential values paired with their joint strategies, if the game has the FIP.
pub fn ordinal_potential_certificate<G: NormalForm + ?Sized>(
    game: &G,
) -> Result<Option<Vec<(JointStrategy, u64)>>, DynamicsError> {
    let graph = improvement_graph(game)?;
    Ok(graph
        .potential()
        .map(|p| graph.profiles.iter().cloned().zip(p).collect()))
}

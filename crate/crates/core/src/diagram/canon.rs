//! Canonical node numbering.
//!
//! Ports are ordered, so a breadth-first walk that starts from the ordered
//! boundary and visits neighbours in port order assigns the same numbers to
//! isomorphic diagrams. Components that never touch the boundary (closed
//! scalars) are numbered by trying every root and keeping the smallest
//! encoding, then sorted by that encoding.

use std::collections::VecDeque;

use super::{Diagram, Dst, Edge, Generator, Src, Wiring};

type Encoding = Vec<(
    Generator,
    Vec<Option<(usize, usize)>>,
    Vec<Option<(usize, usize)>>,
)>;

impl Diagram {
    /// Same diagram with nodes renumbered canonically and edges sorted.
    /// Assumes the diagram validates.
    pub fn canonical(&self) -> Diagram {
        let wiring = self.wiring();
        let n = self.nodes.len();
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut seen = vec![false; n];

        let mut seeds = Vec::new();
        for d in wiring.input_dst.iter().flatten() {
            if let Dst::Node(m, _) = *d {
                seeds.push(m);
            }
        }
        for s in wiring.output_src.iter().flatten() {
            if let Src::Node(m, _) = *s {
                seeds.push(m);
            }
        }
        bfs(&wiring, &seeds, &mut seen, &mut order);

        // Closed components.
        let mut components: Vec<(Encoding, Vec<usize>)> = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            let mut members = Vec::new();
            let mut probe = seen.clone();
            bfs(&wiring, &[root], &mut probe, &mut members);
            let mut best: Option<(Encoding, Vec<usize>)> = None;
            for &r in &members {
                let mut local_seen = seen.clone();
                let mut local = Vec::new();
                bfs(&wiring, &[r], &mut local_seen, &mut local);
                let enc = encode(self, &wiring, &local);
                if best.as_ref().is_none_or(|(b, _)| enc < *b) {
                    best = Some((enc, local));
                }
            }
            for &m in &members {
                seen[m] = true;
            }
            components.push(best.expect("component has at least its root"));
        }
        components.sort_by(|a, b| a.0.cmp(&b.0));
        for (_, members) in components {
            order.extend(members);
        }

        let mut new_id = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        let nodes = order.iter().map(|&old| self.nodes[old].clone()).collect();
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| {
                let src = match e.src {
                    Src::Node(m, p) => Src::Node(new_id[m], p),
                    s => s,
                };
                let dst = match e.dst {
                    Dst::Node(m, p) => Dst::Node(new_id[m], p),
                    d => d,
                };
                Edge::new(src, dst)
            })
            .collect();
        edges.sort();
        Diagram::from_parts_unchecked(
            self.types.clone(),
            nodes,
            edges,
            self.inputs.clone(),
            self.outputs.clone(),
        )
    }

    /// Equality of port-graphs up to renumbering of nodes. The declared
    /// base set is not compared.
    pub fn structurally_eq(&self, other: &Diagram) -> bool {
        if self.inputs != other.inputs
            || self.outputs != other.outputs
            || self.nodes.len() != other.nodes.len()
            || self.edges.len() != other.edges.len()
        {
            return false;
        }
        let (a, b) = (self.canonical(), other.canonical());
        a.nodes == b.nodes && a.edges == b.edges
    }
}

fn bfs(w: &Wiring, seeds: &[usize], seen: &mut [bool], order: &mut Vec<usize>) {
    let mut queue = VecDeque::new();
    let visit =
        |m: usize, queue: &mut VecDeque<usize>, seen: &mut [bool], order: &mut Vec<usize>| {
            if !seen[m] {
                seen[m] = true;
                order.push(m);
                queue.push_back(m);
            }
        };
    for &s in seeds {
        visit(s, &mut queue, seen, order);
    }
    while let Some(m) = queue.pop_front() {
        for s in w.in_src[m].iter().flatten() {
            if let Src::Node(k, _) = *s {
                visit(k, &mut queue, seen, order);
            }
        }
        for d in w.out_dst[m].iter().flatten() {
            if let Dst::Node(k, _) = *d {
                visit(k, &mut queue, seen, order);
            }
        }
    }
}

fn encode(d: &Diagram, w: &Wiring, local: &[usize]) -> Encoding {
    let mut pos = std::collections::HashMap::with_capacity(local.len());
    for (i, &m) in local.iter().enumerate() {
        pos.insert(m, i);
    }
    local
        .iter()
        .map(|&m| {
            let ins = w.in_src[m]
                .iter()
                .map(|s| match s {
                    Some(Src::Node(k, p)) => pos.get(k).map(|&i| (i, *p)),
                    _ => None,
                })
                .collect();
            let outs = w.out_dst[m]
                .iter()
                .map(|s| match s {
                    Some(Dst::Node(k, p)) => pos.get(k).map(|&i| (i, *p)),
                    _ => None,
                })
                .collect();
            (d.nodes[m].clone(), ins, outs)
        })
        .collect()
}

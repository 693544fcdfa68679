//! The pairing graph: one vertex per (machine, flexible job), an edge
//! between the two vertices of each job, and edges pairing consecutive
//! entries of each machine's ordered list.

use std::collections::{HashMap, VecDeque};

/// A connected component in walk order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub cycle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingGraph {
    vertices: Vec<(usize, usize)>,
    twin: Vec<Option<usize>>,
    pair: Vec<Option<usize>>,
}

impl PairingGraph {
    /// `lists[i]` is machine `i`'s ordered job list. Pairs are formed from
    /// position `first_pair` on: `(first_pair, first_pair + 1)`, and so on.
    pub fn new(lists: &[Vec<usize>], first_pair: usize) -> Self {
        let mut vertices = Vec::new();
        let mut pair = Vec::new();
        for (i, list) in lists.iter().enumerate() {
            let base = vertices.len();
            vertices.extend(list.iter().map(|&j| (i, j)));
            pair.extend(std::iter::repeat_n(None, list.len()));
            let mut k = first_pair;
            while k + 1 < list.len() {
                pair[base + k] = Some(base + k + 1);
                pair[base + k + 1] = Some(base + k);
                k += 2;
            }
        }
        let mut twin = vec![None; vertices.len()];
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (v, &(_, j)) in vertices.iter().enumerate() {
            if let Some(u) = seen.insert(j, v) {
                twin[u] = Some(v);
                twin[v] = Some(u);
            }
        }
        PairingGraph {
            vertices,
            twin,
            pair,
        }
    }

    /// `(machine, job)` per vertex.
    pub fn vertices(&self) -> &[(usize, usize)] {
        &self.vertices
    }

    /// The other vertex of the same job.
    pub fn twin(&self, v: usize) -> Option<usize> {
        self.twin[v]
    }

    /// The vertex paired with `v` on its machine.
    pub fn pair(&self, v: usize) -> Option<usize> {
        self.pair[v]
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.twin[v].into_iter().chain(self.pair[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbours(v).count()
    }

    /// Proper 2-coloring by breadth-first search, each component started
    /// black (`true`) at its lowest vertex. `None` if an odd cycle exists.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.vertices.len()];
        for start in 0..self.vertices.len() {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(true);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let c = color[v].expect("queued vertices are colored");
                for u in self.neighbours(v) {
                    match color[u] {
                        None => {
                            color[u] = Some(!c);
                            queue.push_back(u);
                        }
                        Some(cu) if cu == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.expect("all colored")).collect())
    }

    /// Components as paths (from a degree-1 or isolated end) or cycles.
    /// Paths come first, then cycles, each in order of their lowest start.
    pub fn components(&self) -> Vec<Component> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let walk = |start: usize, seen: &mut Vec<bool>| {
            let mut path = vec![start];
            seen[start] = true;
            let mut prev = usize::MAX;
            let mut v = start;
            loop {
                let next = self.neighbours(v).find(|&u| u != prev && !seen[u]);
                match next {
                    Some(u) => {
                        seen[u] = true;
                        path.push(u);
                        prev = v;
                        v = u;
                    }
                    None => return path,
                }
            }
        };
        for v in 0..n {
            if !seen[v] && self.degree(v) <= 1 {
                out.push(Component {
                    vertices: walk(v, &mut seen),
                    cycle: false,
                });
            }
        }
        for v in 0..n {
            if !seen[v] {
                out.push(Component {
                    vertices: walk(v, &mut seen),
                    cycle: true,
                });
            }
        }
        out
    }
}

//! Bipartite matching helpers shared by the rounding procedures.

use std::collections::VecDeque;

/// Maximum matching by augmenting paths (Kuhn). `adj[l]` lists the right
/// vertices adjacent to left vertex `l`, tried in order. Returns the
/// partner of each left vertex.
pub(crate) fn max_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let mut match_right: Vec<Option<usize>> = vec![None; right];
    for l in 0..adj.len() {
        let mut visited = vec![false; right];
        augment(l, adj, &mut match_right, &mut visited);
    }
    let mut match_left = vec![None; adj.len()];
    for (r, l) in match_right.iter().enumerate() {
        if let Some(l) = l {
            match_left[*l] = Some(r);
        }
    }
    match_left
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    match_right: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &r in &adj[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        let free = match match_right[r] {
            None => true,
            Some(other) => augment(other, adj, match_right, visited),
        };
        if free {
            match_right[r] = Some(l);
            return true;
        }
    }
    false
}

/// Starting from a matching that covers every left vertex, re-routes it so
/// that every right vertex flagged in `required` is covered too, without
/// uncovering any left vertex. Returns `false` if that is impossible.
pub(crate) fn cover_required_right(
    adj: &[Vec<usize>],
    match_left: &mut [Option<usize>],
    required: &[bool],
) -> bool {
    let right = required.len();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); right];
    for (l, rs) in adj.iter().enumerate() {
        for &r in rs {
            rev[r].push(l);
        }
    }
    let mut match_right: Vec<Option<usize>> = vec![None; right];
    for (l, r) in match_left.iter().enumerate() {
        if let Some(r) = r {
            match_right[*r] = Some(l);
        }
    }
    for start in 0..right {
        if !required[start] || match_right[start].is_some() {
            continue;
        }
        // BFS over right vertices: r -> l (any neighbour) -> match_left[l].
        let mut came_from: Vec<Option<(usize, usize)>> = vec![None; right];
        let mut seen = vec![false; right];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut end = None;
        'bfs: while let Some(r) = queue.pop_front() {
            for &l in &rev[r] {
                let next = match_left[l].expect("left side fully matched");
                if seen[next] {
                    continue;
                }
                seen[next] = true;
                came_from[next] = Some((r, l));
                if !required[next] {
                    end = Some(next);
                    break 'bfs;
                }
                queue.push_back(next);
            }
        }
        let Some(mut r) = end else {
            return false;
        };
        // `r` gives up its partner; walk back shifting each left vertex.
        match_right[r] = None;
        while let Some((prev, l)) = came_from[r] {
            match_left[l] = Some(prev);
            match_right[prev] = Some(l);
            r = prev;
        }
    }
    true
}

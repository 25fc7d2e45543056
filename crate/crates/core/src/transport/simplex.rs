//! Primal network simplex for balanced transportation problems.
//!
//! Block-search pivoting on a strongly feasible spanning tree stored as a
//! thread/depth-first index (parent, thread, successor counts), following the
//! layout used by LEMON's `NetworkSimplex`. Supplies are real-valued; all
//! arcs are uncapacitated.

use super::TransportError;

const STATE_TREE: i8 = 0;
const STATE_LOWER: i8 = 1;
const DIR_UP: i8 = 1;
const DIR_DOWN: i8 = -1;

/// Optimal plan plus a dual certificate.
#[derive(Debug, Clone)]
pub struct TransportSolution {
    pub cost: f64,
    /// Nonzero entries `(i, j, mass)` of the plan.
    pub flows: Vec<(usize, usize, f64)>,
    /// Dual variables on the source side.
    pub alpha: Vec<f64>,
    /// Dual variables on the target side; `alpha_i + beta_j <= c_ij` at optimum.
    pub beta: Vec<f64>,
    pub pivots: usize,
}

impl TransportSolution {
    /// `Σ a_i α_i + Σ b_j β_j`.
    pub fn dual_objective(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(&self.alpha).map(|(x, y)| x * y).sum::<f64>()
            + b.iter().zip(&self.beta).map(|(x, y)| x * y).sum::<f64>()
    }
}

struct Simplex {
    node_num: usize,
    search_arc_num: usize,
    source: Vec<u32>,
    target: Vec<u32>,
    cost: Vec<f64>,
    flow: Vec<f64>,
    state: Vec<i8>,
    pi: Vec<f64>,
    parent: Vec<i64>,
    pred: Vec<usize>,
    thread: Vec<usize>,
    rev_thread: Vec<usize>,
    succ_num: Vec<usize>,
    last_succ: Vec<usize>,
    pred_dir: Vec<i8>,
    dirty_revs: Vec<usize>,
    block_size: usize,
    next_arc: usize,
    tol: f64,
    in_arc: usize,
    join: usize,
    u_in: usize,
    v_in: usize,
    u_out: usize,
    delta: f64,
}

/// Solves `min Σ c_ij P_ij` over plans with marginals `a` and `b`.
///
/// The marginals must be nonnegative with equal totals (up to rounding).
pub fn solve_transport<C>(a: &[f64], b: &[f64], cost: C) -> Result<TransportSolution, TransportError>
where
    C: Fn(usize, usize) -> f64,
{
    let (m, n) = (a.len(), b.len());
    if m == 0 || n == 0 {
        return Err(TransportError::EmptySupport);
    }
    let node_num = m + n;
    let arc_num = m * n;
    if node_num >= u32::MAX as usize {
        return Err(TransportError::InvalidParameter("too many atoms".into()));
    }
    let all_arcs = arc_num + node_num;
    let mut s = Simplex {
        node_num,
        search_arc_num: arc_num,
        source: Vec::with_capacity(all_arcs),
        target: Vec::with_capacity(all_arcs),
        cost: Vec::with_capacity(all_arcs),
        flow: vec![0.0; all_arcs],
        state: vec![STATE_LOWER; all_arcs],
        pi: vec![0.0; node_num + 1],
        parent: vec![0; node_num + 1],
        pred: vec![0; node_num + 1],
        thread: vec![0; node_num + 1],
        rev_thread: vec![0; node_num + 1],
        succ_num: vec![0; node_num + 1],
        last_succ: vec![0; node_num + 1],
        pred_dir: vec![0; node_num + 1],
        dirty_revs: Vec::new(),
        block_size: ((arc_num as f64).sqrt() as usize).max(10),
        next_arc: 0,
        tol: 0.0,
        in_arc: 0,
        join: 0,
        u_in: 0,
        v_in: 0,
        u_out: 0,
        delta: 0.0,
    };
    let mut max_cost = 0.0f64;
    for i in 0..m {
        for j in 0..n {
            let c = cost(i, j);
            if !c.is_finite() || c < 0.0 {
                return Err(TransportError::Solver(format!("cost ({i}, {j}) = {c} is not a finite nonnegative value")));
            }
            max_cost = max_cost.max(c);
            s.source.push(i as u32);
            s.target.push((m + j) as u32);
            s.cost.push(c);
        }
    }
    s.tol = 1e-12 * max_cost.max(1e-300);
    let supply: Vec<f64> = a.iter().copied().chain(b.iter().map(|x| -x)).collect();
    s.init(&supply, max_cost);
    let pivots = s.run()?;

    let mut total = 0.0;
    let mut flows = Vec::new();
    for e in 0..arc_num {
        let f = s.flow[e];
        if f > 0.0 {
            total += f * s.cost[e];
            flows.push((e / n, e % n, f));
        }
    }
    let alpha = (0..m).map(|i| -s.pi[i]).collect();
    let beta = (0..n).map(|j| s.pi[m + j]).collect();
    Ok(TransportSolution { cost: total, flows, alpha, beta, pivots })
}

impl Simplex {
    fn init(&mut self, supply: &[f64], max_cost: f64) {
        let root = self.node_num;
        let art_cost = (max_cost + 1.0) * (self.node_num as f64 + 1.0);
        self.parent[root] = -1;
        self.pred[root] = usize::MAX;
        self.thread[root] = 0;
        self.rev_thread[0] = root;
        self.succ_num[root] = self.node_num + 1;
        self.last_succ[root] = root - 1;
        self.pi[root] = 0.0;
        for u in 0..self.node_num {
            let e = self.search_arc_num + u;
            self.parent[u] = root as i64;
            self.pred[u] = e;
            self.thread[u] = u + 1;
            self.rev_thread[u + 1] = u;
            self.succ_num[u] = 1;
            self.last_succ[u] = u;
            self.state[e] = STATE_TREE;
            if supply[u] >= 0.0 {
                self.pred_dir[u] = DIR_UP;
                self.pi[u] = 0.0;
                self.source.push(u as u32);
                self.target.push(root as u32);
                self.flow[e] = supply[u];
                self.cost.push(0.0);
            } else {
                self.pred_dir[u] = DIR_DOWN;
                self.pi[u] = art_cost;
                self.source.push(root as u32);
                self.target.push(u as u32);
                self.flow[e] = -supply[u];
                self.cost.push(art_cost);
            }
        }
    }

    #[inline]
    fn reduced(&self, e: usize) -> f64 {
        self.state[e] as f64
            * (self.cost[e] + self.pi[self.source[e] as usize] - self.pi[self.target[e] as usize])
    }

    fn find_entering_arc(&mut self) -> bool {
        let mut min = -self.tol;
        let mut found = false;
        let mut cnt = self.block_size;
        let total = self.search_arc_num;
        let start = self.next_arc;
        for step in 0..total {
            let e = (start + step) % total;
            let c = self.reduced(e);
            if c < min {
                min = c;
                self.in_arc = e;
                found = true;
            }
            cnt -= 1;
            if cnt == 0 {
                if found {
                    self.next_arc = (e + 1) % total;
                    return true;
                }
                cnt = self.block_size;
            }
        }
        if found {
            self.next_arc = (self.in_arc + 1) % total;
        }
        found
    }

    fn find_join_node(&mut self) {
        let mut u = self.source[self.in_arc] as usize;
        let mut v = self.target[self.in_arc] as usize;
        while u != v {
            if self.succ_num[u] < self.succ_num[v] {
                u = self.parent[u] as usize;
            } else {
                v = self.parent[v] as usize;
            }
        }
        self.join = u;
    }

    fn find_leaving_arc(&mut self) -> bool {
        let (first, second) = if self.state[self.in_arc] == STATE_LOWER {
            (self.source[self.in_arc] as usize, self.target[self.in_arc] as usize)
        } else {
            (self.target[self.in_arc] as usize, self.source[self.in_arc] as usize)
        };
        self.delta = f64::INFINITY;
        let mut result = 0;
        let mut u = first;
        while u != self.join {
            if self.pred_dir[u] == DIR_UP {
                let d = self.flow[self.pred[u]];
                if d < self.delta {
                    self.delta = d;
                    self.u_out = u;
                    result = 1;
                }
            }
            u = self.parent[u] as usize;
        }
        let mut u = second;
        while u != self.join {
            if self.pred_dir[u] == DIR_DOWN {
                let d = self.flow[self.pred[u]];
                if d <= self.delta {
                    self.delta = d;
                    self.u_out = u;
                    result = 2;
                }
            }
            u = self.parent[u] as usize;
        }
        if result == 1 {
            self.u_in = first;
            self.v_in = second;
        } else {
            self.u_in = second;
            self.v_in = first;
        }
        result != 0
    }

    fn change_flow(&mut self) {
        let delta = self.delta.max(0.0);
        if delta > 0.0 {
            let val = self.state[self.in_arc] as f64 * delta;
            self.flow[self.in_arc] += val;
            let mut u = self.source[self.in_arc] as usize;
            while u != self.join {
                let e = self.pred[u];
                self.flow[e] = (self.flow[e] - self.pred_dir[u] as f64 * val).max(0.0);
                u = self.parent[u] as usize;
            }
            let mut u = self.target[self.in_arc] as usize;
            while u != self.join {
                let e = self.pred[u];
                self.flow[e] = (self.flow[e] + self.pred_dir[u] as f64 * val).max(0.0);
                u = self.parent[u] as usize;
            }
        }
        let out = self.pred[self.u_out];
        self.flow[out] = 0.0;
        self.state[self.in_arc] = STATE_TREE;
        self.state[out] = STATE_LOWER;
    }

    fn update_tree_structure(&mut self) {
        let u_in = self.u_in;
        let v_in = self.v_in;
        let u_out = self.u_out;
        let join = self.join;
        let in_arc = self.in_arc;
        let old_rev_thread = self.rev_thread[u_out];
        let old_succ_num = self.succ_num[u_out];
        let old_last_succ = self.last_succ[u_out];
        let v_out = self.parent[u_out] as usize;

        if u_in == u_out {
            self.parent[u_in] = v_in as i64;
            self.pred[u_in] = in_arc;
            self.pred_dir[u_in] = if u_in == self.source[in_arc] as usize { DIR_UP } else { DIR_DOWN };
            if self.thread[v_in] != u_out {
                let mut after = self.thread[old_last_succ];
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
                after = self.thread[v_in];
                self.thread[v_in] = u_out;
                self.rev_thread[u_out] = v_in;
                self.thread[old_last_succ] = after;
                self.rev_thread[after] = old_last_succ;
            }
        } else {
            let thread_continue = if old_rev_thread == v_in {
                self.thread[old_last_succ]
            } else {
                self.thread[v_in]
            };
            let mut stem = u_in;
            let mut par_stem = v_in;
            let mut last = self.last_succ[u_in];
            let mut after = self.thread[last];
            self.thread[v_in] = u_in;
            self.dirty_revs.clear();
            self.dirty_revs.push(v_in);
            while stem != u_out {
                let next_stem = self.parent[stem] as usize;
                self.thread[last] = next_stem;
                self.dirty_revs.push(last);
                let before = self.rev_thread[stem];
                self.thread[before] = after;
                self.rev_thread[after] = before;
                self.parent[stem] = par_stem as i64;
                par_stem = stem;
                stem = next_stem;
                last = if self.last_succ[stem] == self.last_succ[par_stem] {
                    self.rev_thread[par_stem]
                } else {
                    self.last_succ[stem]
                };
                after = self.thread[last];
            }
            self.parent[u_out] = par_stem as i64;
            self.thread[last] = thread_continue;
            self.rev_thread[thread_continue] = last;
            self.last_succ[u_out] = last;
            if old_rev_thread != v_in {
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
            }
            for i in 0..self.dirty_revs.len() {
                let u = self.dirty_revs[i];
                let t = self.thread[u];
                self.rev_thread[t] = u;
            }
            let mut tmp_sc: i64 = 0;
            let tmp_ls = self.last_succ[u_out];
            let mut u = u_out;
            while u != u_in {
                let p = self.parent[u] as usize;
                self.pred[u] = self.pred[p];
                self.pred_dir[u] = -self.pred_dir[p];
                tmp_sc += self.succ_num[u] as i64 - self.succ_num[p] as i64;
                self.succ_num[u] = tmp_sc as usize;
                self.last_succ[p] = tmp_ls;
                u = p;
            }
            self.pred[u_in] = in_arc;
            self.pred_dir[u_in] = if u_in == self.source[in_arc] as usize { DIR_UP } else { DIR_DOWN };
            self.succ_num[u_in] = old_succ_num;
        }

        let up_limit_out: i64 = if self.last_succ[join] == v_in { join as i64 } else { -1 };
        let last_succ_out = self.last_succ[u_out];
        let mut u = v_in as i64;
        while u != -1 && self.last_succ[u as usize] == v_in {
            self.last_succ[u as usize] = last_succ_out;
            u = self.parent[u as usize];
        }
        if join != old_rev_thread && v_in != old_rev_thread {
            let mut u = v_out as i64;
            while u != up_limit_out && self.last_succ[u as usize] == old_last_succ {
                self.last_succ[u as usize] = old_rev_thread;
                u = self.parent[u as usize];
            }
        } else if last_succ_out != old_last_succ {
            let mut u = v_out as i64;
            while u != up_limit_out && self.last_succ[u as usize] == old_last_succ {
                self.last_succ[u as usize] = last_succ_out;
                u = self.parent[u as usize];
            }
        }
        let mut u = v_in;
        while u != join {
            self.succ_num[u] += old_succ_num;
            u = self.parent[u] as usize;
        }
        let mut u = v_out;
        while u != join {
            self.succ_num[u] -= old_succ_num;
            u = self.parent[u] as usize;
        }
    }

    fn update_potential(&mut self) {
        let u_in = self.u_in;
        let sigma = self.pi[self.v_in] - self.pi[u_in] - self.pred_dir[u_in] as f64 * self.cost[self.in_arc];
        let end = self.thread[self.last_succ[u_in]];
        let mut u = u_in;
        while u != end {
            self.pi[u] += sigma;
            u = self.thread[u];
        }
    }

    fn run(&mut self) -> Result<usize, TransportError> {
        let mut pivots = 0usize;
        let limit = 50 * (self.search_arc_num + self.node_num) + 1_000_000;
        while self.find_entering_arc() {
            self.find_join_node();
            if !self.find_leaving_arc() {
                return Err(TransportError::Solver("unbounded pivot".into()));
            }
            self.change_flow();
            self.update_tree_structure();
            self.update_potential();
            pivots += 1;
            if pivots > limit {
                return Err(TransportError::Solver(format!("no convergence after {pivots} pivots")));
            }
        }
        Ok(pivots)
    }
}

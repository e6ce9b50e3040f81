use alloc::collections::VecDeque;
use alloc::vec::Vec;

/// The `s` most recent states and right-hand sides, newest first.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    dim: usize,
    depth: usize,
    states: VecDeque<Vec<f64>>,
    rhs: VecDeque<Vec<f64>>,
}

impl History {
    pub fn new(dim: usize, depth: usize) -> Self {
        History {
            dim,
            depth,
            states: VecDeque::with_capacity(depth),
            rhs: VecDeque::with_capacity(depth),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_warm(&self) -> bool {
        self.states.len() == self.depth
    }

    /// Pushes `(y, f(y))` as the newest entry, evicting the oldest when full.
    pub fn push(&mut self, state: Vec<f64>, rhs: Vec<f64>) {
        assert_eq!(state.len(), self.dim);
        assert_eq!(rhs.len(), self.dim);
        if self.states.len() == self.depth {
            self.states.pop_back();
            self.rhs.pop_back();
        }
        self.states.push_front(state);
        self.rhs.push_front(rhs);
    }

    /// `y_{n-l}`.
    pub fn state(&self, l: usize) -> &[f64] {
        &self.states[l]
    }

    /// `f_{n-l}`.
    pub fn rhs(&self, l: usize) -> &[f64] {
        &self.rhs[l]
    }
}

/// Fixed-capacity circular buffer holding the most recent innovations in
/// arrival order. Capacity is `window_len + 1` so that a full window covers
/// the current innovation plus the `window_len` before it.
#[derive(Debug, Clone)]
pub struct RingWindow {
    values: Vec<f64>,
    head: usize,
    len: usize,
}

impl RingWindow {
    pub fn with_capacity(capacity: usize) -> Self {
        assert!(capacity >= 1, "ring window needs capacity >= 1");
        RingWindow {
            values: vec![0.0; capacity],
            head: 0,
            len: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.values.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Append a value, evicting the oldest when full.
    pub fn push(&mut self, value: f64) {
        let cap = self.values.len();
        if self.len < cap {
            self.values[(self.head + self.len) % cap] = value;
            self.len += 1;
        } else {
            self.values[self.head] = value;
            self.head = (self.head + 1) % cap;
        }
    }

    /// Copy the contents into `out` in chronological order (oldest first).
    pub fn copy_ordered(&self, out: &mut Vec<f64>) {
        out.clear();
        let cap = self.values.len();
        for i in 0..self.len {
            out.push(self.values[(self.head + i) % cap]);
        }
    }

    /// Contents in chronological order as a fresh vector.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len);
        self.copy_ordered(&mut out);
        out
    }

    /// Oldest element still in the window.
    pub fn oldest(&self) -> Option<f64> {
        if self.len == 0 {
            None
        } else {
            Some(self.values[self.head])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fills_then_rotates() {
        let mut w = RingWindow::with_capacity(3);
        assert!(w.is_empty());
        for v in 1..=3 {
            w.push(v as f64);
        }
        assert_eq!(w.to_vec(), vec![1.0, 2.0, 3.0]);
        w.push(4.0);
        assert_eq!(w.to_vec(), vec![2.0, 3.0, 4.0]);
        assert_eq!(w.oldest(), Some(2.0));
        w.push(5.0);
        w.push(6.0);
        assert_eq!(w.to_vec(), vec![4.0, 5.0, 6.0]);
        assert_eq!(w.len(), 3);
    }

    #[test]
    fn copy_reuses_buffer() {
        let mut w = RingWindow::with_capacity(2);
        w.push(1.0);
        let mut buf = vec![9.0; 8];
        w.copy_ordered(&mut buf);
        assert_eq!(buf, vec![1.0]);
    }
}

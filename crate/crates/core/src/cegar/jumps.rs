use super::{Constraint, ConstraintFamily};
use crate::net::{TransitionId, TransitionVector};

/// Enumerates the nonempty subsets of `0..k` by ascending size, each size in
/// lexicographic order of indices.
#[derive(Clone, Debug)]
pub struct SubsetCursor {
    k: usize,
    current: Vec<usize>,
    exhausted: bool,
}

impl SubsetCursor {
    pub fn new(k: usize) -> Self {
        SubsetCursor {
            k,
            current: Vec::new(),
            exhausted: k == 0,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    fn advance(&mut self) -> bool {
        let size = self.current.len();
        if size == 0 {
            self.current = vec![0];
            return true;
        }
        // Rightmost position that can still move.
        for i in (0..size).rev() {
            if self.current[i] < self.k - size + i {
                self.current[i] += 1;
                for j in i + 1..size {
                    self.current[j] = self.current[j - 1] + 1;
                }
                return true;
            }
        }
        if size == self.k {
            return false;
        }
        self.current = (0..=size).collect();
        true
    }
}

impl Iterator for SubsetCursor {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.exhausted {
            return None;
        }
        if !self.advance() {
            self.exhausted = true;
            return None;
        }
        Some(self.current.clone())
    }
}

/// Lazily produced jump children of one solved job.
#[derive(Clone, Debug)]
pub struct JumpFamily {
    pub base: ConstraintFamily,
    pub x: TransitionVector,
    pub sequence: Vec<TransitionId>,
    pub remainder: TransitionVector,
    /// `(t, y(t))` for every `t` with `y(t) > x(t)`.
    pub candidates: Vec<(TransitionId, u64)>,
    cursor: SubsetCursor,
}

impl JumpFamily {
    pub fn new(
        base: ConstraintFamily,
        x: TransitionVector,
        y: &TransitionVector,
        sequence: Vec<TransitionId>,
        remainder: TransitionVector,
    ) -> Self {
        let candidates: Vec<(TransitionId, u64)> = y
            .support()
            .filter(|&t| y.get(t) > x.get(t))
            .map(|t| (t, y.get(t)))
            .collect();
        let cursor = SubsetCursor::new(candidates.len());
        JumpFamily {
            base,
            x,
            sequence,
            remainder,
            candidates,
            cursor,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        self.cursor.is_exhausted()
    }
}

/// Next child constraint set of the family, or `None` once every subset was
/// produced.
pub fn spawn_jump_children(family: &mut JumpFamily) -> Option<ConstraintFamily> {
    let subset = family.cursor.next()?;
    let mut constraints = family.base.clone();
    for i in subset {
        let (t, bound) = family.candidates[i];
        constraints.insert(Constraint::jump(t, bound).expect("candidates have y(t) > 0"));
    }
    Some(constraints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_by_size_then_index() {
        let all: Vec<Vec<usize>> = SubsetCursor::new(3).collect();
        assert_eq!(
            all,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
        assert_eq!(SubsetCursor::new(0).count(), 0);
        assert_eq!(SubsetCursor::new(6).count(), 63);
    }

    #[test]
    fn children_in_order() {
        let (a, b) = (TransitionId(0), TransitionId(1));
        let y = TransitionVector::from_vec(vec![2, 1, 0]);
        let mut family = JumpFamily::new(
            ConstraintFamily::new(),
            TransitionVector::zeros(3),
            &y,
            vec![],
            TransitionVector::zeros(3),
        );
        let ja = Constraint::jump(a, 2).unwrap();
        let jb = Constraint::jump(b, 1).unwrap();
        assert_eq!(spawn_jump_children(&mut family), Some([ja.clone()].into()));
        assert_eq!(spawn_jump_children(&mut family), Some([jb.clone()].into()));
        assert_eq!(spawn_jump_children(&mut family), Some([ja, jb].into()));
        assert_eq!(spawn_jump_children(&mut family), None);
        assert!(family.is_exhausted());
    }

    #[test]
    fn no_candidates_when_y_equals_x() {
        let y = TransitionVector::from_vec(vec![1, 1]);
        let mut family =
            JumpFamily::new(ConstraintFamily::new(), y.clone(), &y, vec![], TransitionVector::zeros(2));
        assert!(family.is_exhausted());
        assert_eq!(spawn_jump_children(&mut family), None);
    }
}

use super::{Marking, PetriNet, PlaceId, TransitionId, TransitionVector};

/// Above this many place x transition entries the matrix is stored by column.
pub const DENSE_LIMIT: usize = 10_000;

/// Incidence matrix with entry(s, t) = F(t, s) - F(s, t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IncidenceMatrix {
    Dense {
        places: usize,
        transitions: usize,
        /// Row-major: `entries[s * transitions + t]`.
        entries: Vec<i128>,
    },
    Sparse {
        places: usize,
        /// Nonzero `(place, entry)` pairs per transition, sorted by place.
        columns: Vec<Vec<(PlaceId, i128)>>,
    },
}

impl IncidenceMatrix {
    pub fn of(net: &PetriNet) -> Self {
        let places = net.place_count();
        let transitions = net.transition_count();
        let columns: Vec<Vec<(PlaceId, i128)>> = net
            .transitions()
            .map(|t| sparse_column(net, t))
            .collect();
        if places * transitions < DENSE_LIMIT {
            let mut entries = vec![0; places * transitions];
            for (t, column) in columns.iter().enumerate() {
                for &(s, v) in column {
                    entries[s.0 * transitions + t] = v;
                }
            }
            IncidenceMatrix::Dense {
                places,
                transitions,
                entries,
            }
        } else {
            IncidenceMatrix::Sparse { places, columns }
        }
    }

    pub fn places(&self) -> usize {
        match self {
            IncidenceMatrix::Dense { places, .. } | IncidenceMatrix::Sparse { places, .. } => {
                *places
            }
        }
    }

    pub fn transitions(&self) -> usize {
        match self {
            IncidenceMatrix::Dense { transitions, .. } => *transitions,
            IncidenceMatrix::Sparse { columns, .. } => columns.len(),
        }
    }

    pub fn get(&self, s: PlaceId, t: TransitionId) -> i128 {
        match self {
            IncidenceMatrix::Dense {
                transitions,
                entries,
                ..
            } => entries[s.0 * transitions + t.0],
            IncidenceMatrix::Sparse { columns, .. } => columns[t.0]
                .binary_search_by_key(&s, |&(p, _)| p)
                .map(|i| columns[t.0][i].1)
                .unwrap_or(0),
        }
    }

    /// Nonzero entries of column `t`.
    pub fn column(&self, t: TransitionId) -> Vec<(PlaceId, i128)> {
        match self {
            IncidenceMatrix::Dense {
                places,
                transitions,
                entries,
            } => (0..*places)
                .filter_map(|s| {
                    let v = entries[s * transitions + t.0];
                    (v != 0).then_some((PlaceId(s), v))
                })
                .collect(),
            IncidenceMatrix::Sparse { columns, .. } => columns[t.0].clone(),
        }
    }

    /// `I * x`, one entry per place.
    pub fn apply(&self, x: &TransitionVector) -> Vec<i128> {
        let mut out = vec![0i128; self.places()];
        for t in x.support() {
            let n = i128::from(x.get(t));
            for (s, v) in self.column(t) {
                out[s.0] += v * n;
            }
        }
        out
    }

    /// Whether `m + I * x = target` holds exactly.
    pub fn satisfies_state_equation(
        &self,
        m: &Marking,
        x: &TransitionVector,
        target: &Marking,
    ) -> bool {
        self.apply(x)
            .iter()
            .enumerate()
            .all(|(s, d)| i128::from(m.as_slice()[s]) + d == i128::from(target.as_slice()[s]))
    }
}

fn sparse_column(net: &PetriNet, t: TransitionId) -> Vec<(PlaceId, i128)> {
    let mut column: Vec<(PlaceId, i128)> = Vec::new();
    for &(s, w) in net.pre(t) {
        column.push((s, -i128::from(w)));
    }
    for &(s, w) in net.post(t) {
        match column.iter_mut().find(|(p, _)| *p == s) {
            Some(entry) => entry.1 += i128::from(w),
            None => column.push((s, i128::from(w))),
        }
    }
    column.retain(|&(_, v)| v != 0);
    column.sort_unstable_by_key(|&(s, _)| s);
    column
}

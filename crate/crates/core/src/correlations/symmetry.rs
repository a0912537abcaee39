use serde::{Deserialize, Serialize};

use super::behavior::Behavior;
use super::scenario::Scenario;
use super::vertex::{enumerate_vertices, DeterministicVertex};
use super::CorrelationError;

/// Which relabelings count as equivalent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelabelingGroup {
    Identity,
    /// Setting permutations plus one outcome permutation shared by all
    /// settings.
    GlobalOutcomes,
    /// Setting permutations plus an independent outcome permutation per
    /// setting. Order `S! * (R!)^S`.
    PerSettingOutcomes,
}

/// One relabeling: setting `x` becomes `settings[x]`, and an outcome `a`
/// of setting `x` becomes `outcomes[x][a]`. The same map applies at every
/// time step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    pub settings: Vec<usize>,
    pub outcomes: Vec<Vec<usize>>,
}

impl Relabeling {
    pub fn act(&self, v: &DeterministicVertex) -> DeterministicVertex {
        let s = *v.scenario();
        let mut out = vec![0; s.contexts()];
        for (ctx, &o) in v.assignment().iter().enumerate() {
            let (_, prefix) = s.context_at(ctx);
            let image: Vec<usize> = prefix.iter().map(|&x| self.settings[x]).collect();
            let last = *prefix.last().expect("non-empty prefix");
            out[s.context_index(&image)] = self.outcomes[last][o];
        }
        DeterministicVertex::new(s, out).expect("relabeling preserves shape")
    }

    /// Action on arbitrary behaviors:
    /// `p'(sigma(a) | pi(x)) = p(a | x)`.
    pub fn act_behavior(&self, b: &Behavior) -> Behavior {
        let s = *b.scenario();
        let mut out = Behavior::zeros(s);
        for x in 0..s.setting_sequences() {
            let xs = s.setting_sequence(x);
            let ys: Vec<usize> = xs.iter().map(|&x| self.settings[x]).collect();
            for a in 0..s.outcome_sequences() {
                let os = s.outcome_sequence(a);
                let image: Vec<usize> = os
                    .iter()
                    .zip(&xs)
                    .map(|(&o, &x)| self.outcomes[x][o])
                    .collect();
                out.set(&image, &ys, b.at(x, a));
            }
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All elements of the group, identity first.
pub fn group_elements(s: &Scenario, group: RelabelingGroup) -> Vec<Relabeling> {
    let ident_s: Vec<usize> = (0..s.settings()).collect();
    let ident_o: Vec<usize> = (0..s.outcomes()).collect();
    match group {
        RelabelingGroup::Identity => vec![Relabeling {
            settings: ident_s,
            outcomes: vec![ident_o; s.settings()],
        }],
        RelabelingGroup::GlobalOutcomes => {
            let mut out = Vec::new();
            for sp in permutations(s.settings()) {
                for op in permutations(s.outcomes()) {
                    out.push(Relabeling {
                        settings: sp.clone(),
                        outcomes: vec![op; s.settings()],
                    });
                }
            }
            out
        }
        RelabelingGroup::PerSettingOutcomes => {
            let operms = permutations(s.outcomes());
            // Cartesian power of outcome permutations, one per setting.
            let mut combos: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
            for _ in 0..s.settings() {
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        operms.iter().map(move |p| {
                            let mut c = c.clone();
                            c.push(p.clone());
                            c
                        })
                    })
                    .collect();
            }
            let mut out = Vec::new();
            for sp in permutations(s.settings()) {
                for c in &combos {
                    out.push(Relabeling {
                        settings: sp.clone(),
                        outcomes: c.clone(),
                    });
                }
            }
            out
        }
    }
}

/// An equivalence class of vertices, identified by enumeration index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    /// Smallest index in the orbit.
    pub representative: usize,
    /// Sorted member indices.
    pub members: Vec<usize>,
}

/// Partitions the vertices into orbits, ordered by representative.
pub fn classify_vertices(
    s: &Scenario,
    group: RelabelingGroup,
    cap: usize,
) -> Result<Vec<Orbit>, CorrelationError> {
    let vertices = enumerate_vertices(s, cap)?;
    let elements = group_elements(s, group);
    let mut orbit_of = vec![usize::MAX; vertices.len()];
    let mut orbits: Vec<Orbit> = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members: Vec<usize> = elements
            .iter()
            .map(|g| g.act(v).index_usize().expect("index below cap"))
            .collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            orbit_of[m] = id;
        }
        orbits.push(Orbit {
            representative: i,
            members,
        });
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::vertex::{named_vertex, DEFAULT_VERTEX_CAP};

    #[test]
    fn group_orders() {
        let s = Scenario::simplest();
        assert_eq!(group_elements(&s, RelabelingGroup::Identity).len(), 1);
        assert_eq!(group_elements(&s, RelabelingGroup::GlobalOutcomes).len(), 4);
        assert_eq!(
            group_elements(&s, RelabelingGroup::PerSettingOutcomes).len(),
            8
        );
        let s = Scenario::new(2, 3, 2).unwrap();
        assert_eq!(
            group_elements(&s, RelabelingGroup::PerSettingOutcomes).len(),
            72
        );
    }

    #[test]
    fn ten_classes_in_simplest_scenario() {
        let s = Scenario::simplest();
        let orbits =
            classify_vertices(&s, RelabelingGroup::PerSettingOutcomes, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(orbits.len(), 10);
        assert_eq!(orbits.iter().map(|o| o.members.len()).sum::<usize>(), 64);
        let orbit_of = |name: &str| {
            let idx = named_vertex(name).unwrap().index_usize().unwrap();
            orbits
                .iter()
                .position(|o| o.members.contains(&idx))
                .unwrap()
        };
        let mut ids: Vec<usize> = ["e1", "e2", "e3", "e4"]
            .iter()
            .map(|n| orbit_of(n))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 4);
    }

    #[test]
    fn weaker_groups_give_more_classes() {
        let s = Scenario::simplest();
        let id = classify_vertices(&s, RelabelingGroup::Identity, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(id.len(), 64);
        assert!(id.iter().all(|o| o.members.len() == 1));
        let global =
            classify_vertices(&s, RelabelingGroup::GlobalOutcomes, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(global.len(), 20);
    }

    #[test]
    fn vertex_and_behavior_actions_agree() {
        let s = Scenario::new(2, 3, 2).unwrap();
        let vs = enumerate_vertices(&s, DEFAULT_VERTEX_CAP).unwrap();
        for g in group_elements(&s, RelabelingGroup::PerSettingOutcomes)
            .iter()
            .step_by(7)
        {
            for v in vs.iter().step_by(31) {
                assert_eq!(g.act(v).behavior(), g.act_behavior(&v.behavior()));
            }
        }
    }
}

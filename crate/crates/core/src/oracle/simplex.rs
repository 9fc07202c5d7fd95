//! Nelder–Mead downhill simplex with restarts.

/// Outcome of one local minimization.
#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// The simplex collapsed below `tol` and a fresh simplex at the best
    /// point could not improve on it by more than `tol`.
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Simplex {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Simplex {
    fn around<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], step: f64) -> Self {
        let mut points = vec![x0.to_vec()];
        for i in 0..x0.len() {
            let mut p = x0.to_vec();
            p[i] += step;
            points.push(p);
        }
        let values = points.iter().map(|p| f(p)).collect();
        Self { points, values }
    }

    fn order(&mut self) {
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        self.points = idx.iter().map(|&i| self.points[i].clone()).collect();
        self.values = idx.iter().map(|&i| self.values[i]).collect();
    }

    fn spread(&self) -> f64 {
        self.values[self.values.len() - 1] - self.values[0]
    }
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b − a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Runs simplex descent from `x0` until the spread of objective values drops
/// to `tol`, then restarts at the best vertex; stops when a restart gains
/// less than `tol` or after `max_iter` iterations in total.
pub fn minimize<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step: f64,
    tol: f64,
    max_iter: usize,
) -> Minimum {
    let dim = x0.len();
    let mut iterations = 0;
    let mut simplex = Simplex::around(&f, x0, step);
    let mut previous_best = f64::INFINITY;
    loop {
        simplex.order();
        while simplex.spread() > tol && iterations < max_iter {
            iterations += 1;
            let worst = dim;
            let centroid: Vec<f64> = (0..dim)
                .map(|j| simplex.points[..dim].iter().map(|p| p[j]).sum::<f64>() / dim as f64)
                .collect();
            let reflected = affine(&centroid, &simplex.points[worst], -REFLECT);
            let fr = f(&reflected);
            if fr < simplex.values[0] {
                let expanded = affine(&centroid, &simplex.points[worst], -EXPAND);
                let fe = f(&expanded);
                if fe < fr {
                    simplex.points[worst] = expanded;
                    simplex.values[worst] = fe;
                } else {
                    simplex.points[worst] = reflected;
                    simplex.values[worst] = fr;
                }
            } else if fr < simplex.values[worst - 1] {
                simplex.points[worst] = reflected;
                simplex.values[worst] = fr;
            } else {
                let (target, ft) = if fr < simplex.values[worst] {
                    (reflected, fr)
                } else {
                    (simplex.points[worst].clone(), simplex.values[worst])
                };
                let contracted = affine(&centroid, &target, CONTRACT);
                let fc = f(&contracted);
                if fc < ft {
                    simplex.points[worst] = contracted;
                    simplex.values[worst] = fc;
                } else {
                    let best = simplex.points[0].clone();
                    for i in 1..=dim {
                        simplex.points[i] = affine(&best, &simplex.points[i], SHRINK);
                        simplex.values[i] = f(&simplex.points[i]);
                    }
                }
            }
            simplex.order();
        }
        let best = simplex.values[0];
        let settled = previous_best - best <= tol;
        if settled || iterations >= max_iter {
            return Minimum {
                x: simplex.points[0].clone(),
                value: best,
                iterations,
                converged: settled && simplex.spread() <= tol,
            };
        }
        previous_best = best;
        simplex = Simplex::around(&f, &simplex.points[0].clone(), step);
    }
}

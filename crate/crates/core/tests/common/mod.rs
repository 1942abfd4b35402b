//! Shared helpers for the integration suites: a deterministic generator
//! of valid blow-up programs with branch-consistent multiplicities.

use reszeta::curvette::{curvette_matrix_2d, CurvetteMatrix};
use reszeta::factory::{intersection_matrix, BlowupProgram, Branch, Center, IntersectionMatrix};

/// xorshift64* generator; deterministic across runs and platforms.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// A random valid blow-up program together with its intersection and
/// curvette matrices.
///
/// The tree of centres and the branch attachments are drawn freely; the
/// strict-transform multiplicities `m_i` are then derived so that the
/// branches really are curvettes of their hosts: the multiplicity of a
/// host-`h` curvette image at centre `i` is `a[h][i] - sum over j in J_i
/// of a[h][j]`.
pub fn random_program(rng: &mut Rng) -> (BlowupProgram, IntersectionMatrix, CurvetteMatrix) {
    let n = 2 + rng.below(11) as usize; // 2..=12 centres
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut centers = vec![Center { j: vec![], m: 0 }];
    for i in 2..=n {
        let satellite = !edges.is_empty() && rng.below(3) == 0;
        if satellite {
            let pick = rng.below(edges.len() as u64) as usize;
            let (u, v) = edges.remove(pick);
            edges.push((u, i));
            edges.push((v, i));
            let mut j = vec![u, v];
            j.sort_unstable();
            centers.push(Center { j, m: 0 });
        } else {
            let h = 1 + rng.below((i - 1) as u64) as usize;
            edges.push((h, i));
            centers.push(Center { j: vec![h], m: 0 });
        }
    }
    let n_branches = 1 + rng.below(3) as usize;
    let branches: Vec<Branch> = (0..n_branches)
        .map(|_| Branch {
            host: Some(1 + rng.below(n as u64) as usize),
            mult: 1 + rng.below(2),
        })
        .collect();

    let skeleton = BlowupProgram::new(centers.clone(), branches.clone());
    let m_mat = intersection_matrix(&skeleton).expect("generated tree is valid");
    let a = curvette_matrix_2d(&m_mat).expect("blow-up lattice is unimodular");

    for (i, center) in centers.iter_mut().enumerate() {
        let mut m = 0i64;
        for b in &branches {
            let h = b.host.unwrap() - 1;
            let through: i64 = a.entry(h, i) as i64
                - center
                    .j
                    .iter()
                    .map(|&j| a.entry(h, j - 1) as i64)
                    .sum::<i64>();
            assert!(through >= 0, "curvette multiplicity must be nonnegative");
            m += b.mult as i64 * through;
        }
        center.m = m as u64;
    }
    (BlowupProgram::new(centers, branches), m_mat, a)
}

//! Membership tests behind a common trait so sweeps and the CLI can select
//! them by name.

use num_complex::Complex64;

use super::{
    approx_point_membership, harte_membership, joint_eigenvalues, taylor_membership, JointError,
    MatrixTuple,
};

/// Distance at which a grid point matches a joint eigenvalue.
const JOINT_EIGEN_MATCH: f64 = 1e-8;

pub trait MembershipTest: Send + Sync {
    fn name(&self) -> &'static str;
    fn contains(&self, t: &MatrixTuple, lambda: &[Complex64]) -> Result<bool, JointError>;
}

struct ApproxPoint;

impl MembershipTest for ApproxPoint {
    fn name(&self) -> &'static str {
        "approx-point"
    }
    fn contains(&self, t: &MatrixTuple, lambda: &[Complex64]) -> Result<bool, JointError> {
        approx_point_membership(t, lambda)
    }
}

struct Harte;

impl MembershipTest for Harte {
    fn name(&self) -> &'static str {
        "harte"
    }
    fn contains(&self, t: &MatrixTuple, lambda: &[Complex64]) -> Result<bool, JointError> {
        harte_membership(t, lambda)
    }
}

struct Taylor;

impl MembershipTest for Taylor {
    fn name(&self) -> &'static str {
        "taylor"
    }
    fn contains(&self, t: &MatrixTuple, lambda: &[Complex64]) -> Result<bool, JointError> {
        taylor_membership(t, lambda)
    }
}

struct JointEigen;

impl MembershipTest for JointEigen {
    fn name(&self) -> &'static str {
        "joint-eigen"
    }
    fn contains(&self, t: &MatrixTuple, lambda: &[Complex64]) -> Result<bool, JointError> {
        let eigs = joint_eigenvalues(t)?;
        Ok(eigs.iter().any(|tuple| {
            tuple
                .iter()
                .zip(lambda)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
                <= JOINT_EIGEN_MATCH
        }))
    }
}

/// Every registered membership test, in reporting order.
pub fn all_tests() -> Vec<Box<dyn MembershipTest>> {
    vec![
        Box::new(ApproxPoint),
        Box::new(Harte),
        Box::new(Taylor),
        Box::new(JointEigen),
    ]
}

pub fn lookup(name: &str) -> Option<Box<dyn MembershipTest>> {
    all_tests().into_iter().find(|t| t.name() == name)
}

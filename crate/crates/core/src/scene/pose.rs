use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PoseError {
    #[error("pose contains a non-finite number")]
    NonFinite,
    #[error("quaternion norm {0:e} is degenerate")]
    DegenerateQuaternion(f64),
}

/// Quaternion norms below this are rejected rather than normalized.
pub const MIN_QUATERNION_NORM: f64 = 1e-8;

/// Rigid transform: unit quaternion (scalar first) plus translation in
/// meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    wxyz: [f64; 4],
    position: [f64; 3],
}

impl Default for Pose {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Pose {
    pub const IDENTITY: Pose = Pose {
        wxyz: [1.0, 0.0, 0.0, 0.0],
        position: [0.0, 0.0, 0.0],
    };

    /// Builds a pose, normalizing the quaternion.
    pub fn new(wxyz: [f64; 4], position: [f64; 3]) -> Result<Self, PoseError> {
        if wxyz.iter().chain(&position).any(|x| !x.is_finite()) {
            return Err(PoseError::NonFinite);
        }
        Ok(Pose {
            wxyz: normalize(wxyz)?,
            position,
        })
    }

    pub fn from_position(position: [f64; 3]) -> Result<Self, PoseError> {
        Self::new(Self::IDENTITY.wxyz, position)
    }

    /// Rotation of `angle` radians about `axis` (need not be unit length).
    pub fn from_axis_angle(axis: [f64; 3], angle: f64, position: [f64; 3]) -> Result<Self, PoseError> {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if n.is_nan() || n <= MIN_QUATERNION_NORM {
            return Err(PoseError::DegenerateQuaternion(n));
        }
        let (s, c) = (angle / 2.0).sin_cos();
        Self::new(
            [c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n],
            position,
        )
    }

    pub fn wxyz(&self) -> [f64; 4] {
        self.wxyz
    }

    pub fn position(&self) -> [f64; 3] {
        self.position
    }

    pub fn with_position(self, position: [f64; 3]) -> Result<Self, PoseError> {
        Self::new(self.wxyz, position)
    }

    pub fn with_wxyz(self, wxyz: [f64; 4]) -> Result<Self, PoseError> {
        Self::new(wxyz, self.position)
    }

    /// `self ∘ local`: rotation `q·q'`, translation `t + rotate(q, t')`.
    pub fn compose(&self, local: &Pose) -> Pose {
        let q = quat_mul(self.wxyz, local.wxyz);
        let r = rotate(self.wxyz, local.position);
        Pose {
            // Renormalize so long chains do not drift off the unit sphere.
            wxyz: normalize(q).unwrap_or(Self::IDENTITY.wxyz),
            position: [
                self.position[0] + r[0],
                self.position[1] + r[1],
                self.position[2] + r[2],
            ],
        }
    }

    /// Applies the transform to a point.
    pub fn transform_point(&self, p: [f64; 3]) -> [f64; 3] {
        let r = rotate(self.wxyz, p);
        [
            r[0] + self.position[0],
            r[1] + self.position[1],
            r[2] + self.position[2],
        ]
    }
}

fn normalize(q: [f64; 4]) -> Result<[f64; 4], PoseError> {
    let sq = q.iter().map(|x| x * x).sum::<f64>();
    let norm = sq.sqrt();
    if norm.is_nan() || norm < MIN_QUATERNION_NORM {
        return Err(PoseError::DegenerateQuaternion(norm));
    }
    // Already-unit inputs pass through untouched so values survive a wire
    // round trip bit-for-bit.
    if (sq - 1.0).abs() <= 4.0 * f64::EPSILON {
        return Ok(q);
    }
    Ok([q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm])
}

/// Hamilton product, scalar-first.
pub fn quat_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    let [aw, ax, ay, az] = a;
    let [bw, bx, by, bz] = b;
    [
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ]
}

/// Rotates `v` by unit quaternion `q`: `v + 2w(u×v) + 2u×(u×v)`.
pub fn rotate(q: [f64; 4], v: [f64; 3]) -> [f64; 3] {
    let w = q[0];
    let u = [q[1], q[2], q[3]];
    let uv = cross(u, v);
    let uuv = cross(u, uv);
    [
        v[0] + 2.0 * (w * uv[0] + uuv[0]),
        v[1] + 2.0 * (w * uv[1] + uuv[1]),
        v[2] + 2.0 * (w * uv[2] + uuv[2]),
    ]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

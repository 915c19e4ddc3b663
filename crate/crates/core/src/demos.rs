//! Runnable examples that also serve as end-to-end fixtures.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::api::{
    BoxParams, CameraFrustumParams, FrameParams, GridParams, GuiHandle, PointCloudParams, Result, Server,
};
use crate::scene::Pose;

pub const POINT_COUNT: usize = 10_000;
pub const FRUSTUM_COUNT: usize = 5;
pub const CHAIN_LINKS: usize = 6;
pub const CHAIN_RATE_HZ: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoName {
    PointcloudFrustums,
    SliderDouble,
    Counter,
    KinematicChain,
}

impl DemoName {
    pub const ALL: [DemoName; 4] = [
        DemoName::PointcloudFrustums,
        DemoName::SliderDouble,
        DemoName::Counter,
        DemoName::KinematicChain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DemoName::PointcloudFrustums => "pointcloud_frustums",
            DemoName::SliderDouble => "slider_double",
            DemoName::Counter => "counter",
            DemoName::KinematicChain => "kinematic_chain",
        }
    }
}

impl fmt::Display for DemoName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DemoName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DemoName::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = DemoName::ALL.iter().map(|d| d.as_str()).collect();
                format!("unknown demo {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Background work a demo keeps running. Stops when dropped.
#[derive(Debug)]
pub struct Animator {
    stop: Arc<AtomicBool>,
    thread: Option<JoinHandle<()>>,
}

impl Animator {
    pub fn stop(&mut self) {
        self.stop.store(true, Ordering::Relaxed);
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for Animator {
    fn drop(&mut self) {
        self.stop();
    }
}

/// Installs a demo on a running server.
pub fn install(demo: DemoName, server: &Server) -> Result<Option<Animator>> {
    match demo {
        DemoName::PointcloudFrustums => pointcloud_frustums(server).map(|_| None),
        DemoName::SliderDouble => slider_double(server).map(|_| None),
        DemoName::Counter => counter(server).map(|_| None),
        DemoName::KinematicChain => kinematic_chain(server).map(Some),
    }
}

/// Deterministic synthetic cloud: a noisy torus colored by height.
pub fn synthetic_cloud(n: usize, seed: u64) -> (Vec<f32>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = Vec::with_capacity(3 * n);
    let mut colors = Vec::with_capacity(3 * n);
    for _ in 0..n {
        let u = rng.random::<f32>() * std::f32::consts::TAU;
        let v = rng.random::<f32>() * std::f32::consts::TAU;
        let r = 0.4 + 0.05 * rng.random::<f32>();
        let x = (1.0 + r * v.cos()) * u.cos();
        let y = (1.0 + r * v.cos()) * u.sin();
        let z = r * v.sin();
        positions.extend([x, y, z]);
        let t = ((z + 0.5).clamp(0.0, 1.0) * 255.0) as u8;
        colors.extend([t, 80, 255 - t]);
    }
    (positions, colors)
}

/// A point cloud with camera frustums placed around it, looking inward.
pub fn pointcloud_frustums(server: &Server) -> Result<()> {
    let scene = server.scene();
    scene.add_grid("/grid", GridParams::default())?;
    let (positions, colors) = synthetic_cloud(POINT_COUNT, 7);
    scene.add_point_cloud(
        "/points",
        PointCloudParams {
            positions,
            colors,
            point_size: 0.02,
            ..Default::default()
        },
    )?;
    for i in 0..FRUSTUM_COUNT {
        let angle = i as f64 / FRUSTUM_COUNT as f64 * std::f64::consts::TAU;
        let position = [2.5 * angle.cos(), 2.5 * angle.sin(), 0.8];
        // Camera looks down its local +z; turn it to face the origin.
        let yaw = Pose::from_axis_angle([0.0, 0.0, 1.0], angle + std::f64::consts::PI, position)?;
        let tilt = Pose::from_axis_angle([0.0, 1.0, 0.0], std::f64::consts::FRAC_PI_2, [0.0; 3])?;
        let pose = yaw.compose(&tilt);
        scene.add_camera_frustum(
            &format!("/cameras/{i}"),
            CameraFrustumParams {
                fov: std::f64::consts::FRAC_PI_2,
                aspect: 4.0 / 3.0,
                scale: 0.3,
                color: [200, 60, 60],
                pose,
                ..Default::default()
            },
        )?;
    }
    Ok(())
}

/// Renders a number the way a person would type it: no trailing `.0`.
pub fn format_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        x.to_string()
    }
}

/// A slider whose doubled value is mirrored into a text field, and a box
/// that reports clicks.
pub fn slider_double(server: &Server) -> Result<(GuiHandle, GuiHandle)> {
    let gui = server.gui();
    let slider = gui.add_slider("Value", 0.0, 100.0, 1.0, 0.0)?;
    let text = gui.add_text("Doubled", "0")?;
    {
        let (slider, text) = (slider.clone(), text.clone());
        slider.clone().on_update(move |_| {
            if let Ok(v) = slider.value_f64() {
                if let Err(e) = text.set_value(format_number(v * 2.0)) {
                    tracing::warn!(error = %e, "could not update text");
                }
            }
        })?;
    }
    let cube = server.scene().add_box("/box", BoxParams::default())?;
    cube.on_click(|_| println!("Box clicked"))?;
    Ok((slider, text))
}

/// A button and a markdown line counting its clicks.
pub fn counter(server: &Server) -> Result<(GuiHandle, GuiHandle)> {
    let gui = server.gui();
    let button = gui.add_button("Increment")?;
    let label = gui.add_markdown("Count: 0")?;
    let count = Arc::new(AtomicU64::new(0));
    {
        let label = label.clone();
        button.on_click(move |_| {
            let n = count.fetch_add(1, Ordering::SeqCst) + 1;
            if let Err(e) = label.set_prop("content", format!("Count: {n}")) {
                tracing::warn!(error = %e, "could not update counter");
            }
        })?;
    }
    Ok((button, label))
}

pub fn chain_path(link: usize) -> String {
    (0..=link).fold(String::from("/chain"), |mut p, i| {
        p.push_str(&format!("/link{i}"));
        p
    })
}

/// Local pose of a chain link at time `t` seconds.
pub fn chain_link_pose(link: usize, t: f64) -> Pose {
    let angle = 0.6 * (t * 1.3 + link as f64 * 0.7).sin();
    let offset = if link == 0 { 0.0 } else { 0.4 };
    Pose::from_axis_angle([0.0, 0.0, 1.0], angle, [offset, 0.0, 0.0]).unwrap_or(Pose::IDENTITY)
}

/// Nested frames swinging at 30 Hz.
pub fn kinematic_chain(server: &Server) -> Result<Animator> {
    let scene = server.scene();
    let mut links = Vec::with_capacity(CHAIN_LINKS);
    for i in 0..CHAIN_LINKS {
        links.push(scene.add_frame(
            &chain_path(i),
            FrameParams {
                axes_length: 0.2,
                axes_radius: 0.01,
                pose: chain_link_pose(i, 0.0),
                ..Default::default()
            },
        )?);
    }
    let stop = Arc::new(AtomicBool::new(false));
    let flag = stop.clone();
    let thread = std::thread::Builder::new()
        .name("scenecast-chain".into())
        .spawn(move || {
            let start = Instant::now();
            let period = Duration::from_secs_f64(1.0 / CHAIN_RATE_HZ);
            let mut next = start;
            while !flag.load(Ordering::Relaxed) {
                let t = start.elapsed().as_secs_f64();
                for (i, link) in links.iter().enumerate() {
                    if link.set_pose(chain_link_pose(i, t)).is_err() {
                        return;
                    }
                }
                next += period;
                std::thread::sleep(next.saturating_duration_since(Instant::now()));
            }
        })
        .map_err(|e| crate::api::ApiError::InvalidArgument(format!("cannot start animation: {e}")))?;
    Ok(Animator {
        stop,
        thread: Some(thread),
    })
}

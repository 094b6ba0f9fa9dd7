//! Throwaway pipeline debugging helper.

use lanekit::detectors::{DetectorConfig, PreprocessedFrame};
use lanekit::vision::{canny_with_sigma, hough_segments, BinaryMask, Homography, VisionConfig};

fn frame_from_mask(mask: BinaryMask, row_offset: usize) -> PreprocessedFrame {
    let full_width = mask.width();
    let full_height = mask.height() + row_offset;
    PreprocessedFrame {
        mask,
        row_offset,
        full_width,
        full_height,
    }
}

fn draw_vertical_band(mask: &mut BinaryMask, x0: usize, width: usize, y0: usize, y1: usize) {
    for y in y0..y1 {
        for x in x0..(x0 + width).min(mask.width()) {
            mask.set(x, y, true);
        }
    }
}

fn main() {
    let vision = VisionConfig::default();
    let cfg = DetectorConfig::default();

    // --- dbscan scene ---
    let mut mask = BinaryMask::filled(640, 216, false);
    draw_vertical_band(&mut mask, 148, 5, 20, 210);
    draw_vertical_band(&mut mask, 448, 5, 20, 210);
    let gray = mask.to_gray();
    let edges = canny_with_sigma(&gray, vision.canny_lo, vision.canny_hi, vision.canny_sigma).unwrap();
    println!("dbscan scene: edge pixels = {}", edges.count_true());
    let segs = hough_segments(&edges, &vision.hough).unwrap();
    println!("segments: {}", segs.len());
    for s in &segs {
        println!(
            "  ({:.1},{:.1})-({:.1},{:.1}) len {:.1} slope {:?}",
            s.x1, s.y1, s.x2, s.y2, s.length(), s.slope()
        );
    }

    // --- lsrl scene ---
    let off = 264usize;
    let src: [[f64; 2]; 4] = [
        [cfg.warp_src[0][0], cfg.warp_src[0][1] - off as f64],
        [cfg.warp_src[1][0], cfg.warp_src[1][1] - off as f64],
        [cfg.warp_src[2][0], cfg.warp_src[2][1] - off as f64],
        [cfg.warp_src[3][0], cfg.warp_src[3][1] - off as f64],
    ];
    let dst: [[f64; 2]; 4] = [
        [0.0, 0.0],
        [cfg.warp_w as f64, 0.0],
        [cfg.warp_w as f64, cfg.warp_h as f64],
        [0.0, cfg.warp_h as f64],
    ];
    let h = Homography::from_quads(&src, &dst).unwrap();
    let inv = h.inverse().unwrap();
    let mut mask = BinaryMask::filled(640, 216, false);
    for &xw in &[160.0f64, 480.0] {
        for wy in 0..cfg.warp_h * 4 {
            let yw = wy as f64 / 4.0;
            for dq in -24i32..=24 {
                let x = xw + dq as f64 / 4.0;
                let (sx, sy) = inv.apply_point(x, yw);
                let (ix, iy) = (sx.round() as isize, sy.round() as isize);
                if ix >= 0 && iy >= 0 && (ix as usize) < 640 && (iy as usize) < 216 {
                    mask.set(ix as usize, iy as usize, true);
                }
            }
        }
    }
    println!("\nlsrl scene: roi true px = {}", mask.count_true());
    let warped = h.warp_mask(&mask, cfg.warp_w, cfg.warp_h).unwrap();
    println!("warped true px = {}", warped.count_true());
    let edges =
        canny_with_sigma(&warped.to_gray(), vision.canny_lo, vision.canny_hi, vision.canny_sigma)
            .unwrap();
    println!("warped edges = {}", edges.count_true());
    let segs = hough_segments(&edges, &vision.hough).unwrap();
    println!("warped segments: {}", segs.len());
    for s in &segs {
        println!(
            "  ({:.1},{:.1})-({:.1},{:.1}) len {:.1} slope {:?} steep {}",
            s.x1,
            s.y1,
            s.x2,
            s.y2,
            s.length(),
            s.slope(),
            s.steeper_than(cfg.slope_min)
        );
    }
    let pre = frame_from_mask(mask, off);
    let est = lanekit::detectors::detect_lsrl(&pre, &cfg, &vision, 0);
    println!("lsrl est: valid={} cx={:.1} cy={:.1}", est.valid, est.cx, est.cy);
}

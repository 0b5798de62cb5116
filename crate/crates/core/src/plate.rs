//! Synthetic number plates with analytic ground truth.
//!
//! A plate is a dark border rectangle and a line of block-font glyphs on a
//! light background. The ground-truth edge map comes from the ink geometry
//! alone: pixel `(x, y)` is an edge when its right or lower 4-neighbor lies
//! on the other side of an ink boundary, i.e. every transition between two
//! pixels is attributed to the upper-left one of the pair.
//!
//! Rendering order: ink -> dirt blotches -> optional Gaussian capture blur
//! -> fading. Styles change intensities only, never geometry; dirt pixels
//! are removed from the ground truth.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::filters::{convolve, Kernel};
use crate::font::{glyph, ALPHABET, GLYPH_HEIGHT, GLYPH_WIDTH};
use crate::image::{EdgeMap, GrayImage};
use crate::rng::SplitMix64;

/// Contrast retained by faded plates, relative to mid-gray.
pub const FADE_FACTOR: f64 = 0.35;
/// Upper bound on the fraction of plate area covered by dirt.
pub const DIRT_AREA_CAP: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlateStyle {
    Clean,
    Dirty,
    Faded,
}

impl PlateStyle {
    pub const ALL: [PlateStyle; 3] = [PlateStyle::Clean, PlateStyle::Dirty, PlateStyle::Faded];

    pub fn as_str(self) -> &'static str {
        match self {
            PlateStyle::Clean => "clean",
            PlateStyle::Dirty => "dirty",
            PlateStyle::Faded => "faded",
        }
    }
}

impl fmt::Display for PlateStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlateStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "clean" => Ok(PlateStyle::Clean),
            "dirty" => Ok(PlateStyle::Dirty),
            "faded" => Ok(PlateStyle::Faded),
            other => Err(Error::InvalidParameter(format!(
                "unknown plate style {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateSpec {
    pub width: usize,
    pub height: usize,
    pub text: String,
    pub style: PlateStyle,
    pub seed: u64,
    pub foreground: f64,
    pub background: f64,
    /// Standard deviation of the capture blur in pixels; 0 renders hard steps.
    pub blur_sigma: f64,
}

impl Default for PlateSpec {
    fn default() -> Self {
        Self {
            width: 240,
            height: 80,
            text: "ABC123".to_string(),
            style: PlateStyle::Clean,
            seed: 0,
            foreground: 20.0,
            background: 230.0,
            blur_sigma: 0.0,
        }
    }
}

struct Layout {
    margin: usize,
    border: usize,
    cell_w: usize,
    cell_h: usize,
    text_x: usize,
    text_y: usize,
}

impl PlateSpec {
    pub fn validate(&self) -> Result<()> {
        if self.text.is_empty() {
            return Err(Error::InvalidParameter("plate text is empty".into()));
        }
        if let Some(c) = self.text.chars().find(|&c| glyph(c).is_none()) {
            return Err(Error::UnsupportedGlyph(c));
        }
        if self.height == 0 || 3 * self.width < 4 * self.height {
            return Err(Error::InvalidParameter(format!(
                "plate {}x{} must be at least 4:3 wide",
                self.width, self.height
            )));
        }
        for v in [self.foreground, self.background] {
            if !(0.0..=255.0).contains(&v) {
                return Err(Error::ChannelOutOfRange(v));
            }
        }
        if self.foreground == self.background {
            return Err(Error::InvalidParameter(
                "foreground and background must differ".into(),
            ));
        }
        if !(self.blur_sigma >= 0.0 && self.blur_sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "blur sigma {}",
                self.blur_sigma
            )));
        }
        self.layout().map(|_| ())
    }

    fn layout(&self) -> Result<Layout> {
        let margin = (self.height / 20).max(1);
        let border = (self.height / 20).max(1);
        let pad = (self.height / 16).max(1);
        let inset = margin + border + pad;
        let avail_w = self.width.saturating_sub(2 * inset);
        let avail_h = self.height.saturating_sub(2 * inset);
        let chars = self.text.chars().count();
        let cols = chars * (GLYPH_WIDTH + 1) - 1;
        let cell_w = avail_w / cols;
        let cell_h = avail_h / GLYPH_HEIGHT;
        if cell_w == 0 || cell_h == 0 {
            return Err(Error::InvalidParameter(format!(
                "{chars} glyphs do not fit a {}x{} plate",
                self.width, self.height
            )));
        }
        Ok(Layout {
            margin,
            border,
            cell_w,
            cell_h,
            text_x: inset + (avail_w - cols * cell_w) / 2,
            text_y: inset + (avail_h - GLYPH_HEIGHT * cell_h) / 2,
        })
    }

    /// Ink mask: border frame plus glyph strokes.
    pub fn ink_mask(&self) -> Result<EdgeMap> {
        self.validate()?;
        let l = self.layout()?;
        let (w, h) = (self.width, self.height);
        let mut ink = EdgeMap::empty(w, h);
        let outer = (l.margin, l.margin, w - l.margin, h - l.margin);
        let inner = (
            l.margin + l.border,
            l.margin + l.border,
            w - l.margin - l.border,
            h - l.margin - l.border,
        );
        for y in outer.1..outer.3 {
            for x in outer.0..outer.2 {
                let in_hole = x >= inner.0 && x < inner.2 && y >= inner.1 && y < inner.3;
                if !in_hole {
                    ink.set(x, y, true);
                }
            }
        }
        for (i, c) in self.text.chars().enumerate() {
            let rows = glyph(c).ok_or(Error::UnsupportedGlyph(c))?;
            let x0 = l.text_x + i * (GLYPH_WIDTH + 1) * l.cell_w;
            for (gy, row) in rows.iter().enumerate() {
                for (gx, cell) in row.bytes().enumerate() {
                    if cell != b'#' {
                        continue;
                    }
                    for y in 0..l.cell_h {
                        for x in 0..l.cell_w {
                            ink.set(x0 + gx * l.cell_w + x, l.text_y + gy * l.cell_h + y, true);
                        }
                    }
                }
            }
        }
        Ok(ink)
    }

    /// Semicolon-separated `key=value` fields, the manifest payload.
    pub fn to_fields(&self) -> String {
        format!(
            "width={};height={};text={};style={};seed={};fg={};bg={};blur={}",
            self.width,
            self.height,
            self.text,
            self.style,
            self.seed,
            self.foreground,
            self.background,
            self.blur_sigma
        )
    }
}

impl FromStr for PlateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = PlateSpec::default();
        for field in s.split(';').filter(|f| !f.trim().is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("plate field {field:?}")))?;
            let bad = || Error::InvalidParameter(format!("plate field {field:?}"));
            match key.trim() {
                "width" => spec.width = value.trim().parse().map_err(|_| bad())?,
                "height" => spec.height = value.trim().parse().map_err(|_| bad())?,
                // text may legitimately contain spaces; keep it verbatim
                "text" => spec.text = value.to_string(),
                "style" => spec.style = value.parse()?,
                "seed" => spec.seed = value.trim().parse().map_err(|_| bad())?,
                "fg" => spec.foreground = value.trim().parse().map_err(|_| bad())?,
                "bg" => spec.background = value.trim().parse().map_err(|_| bad())?,
                "blur" => spec.blur_sigma = value.trim().parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Ground truth from an ink mask: right or lower neighbor differs.
pub fn boundary_pixels(ink: &EdgeMap) -> EdgeMap {
    let (w, h) = ink.dimensions();
    EdgeMap::from_fn(w, h, |x, y| {
        let v = ink.get(x, y);
        (x + 1 < w && ink.get(x + 1, y) != v) || (y + 1 < h && ink.get(x, y + 1) != v)
    })
}

/// Seeded discs of mid-gray covering at most [`DIRT_AREA_CAP`] of the plate.
fn dirt_mask(spec: &PlateSpec) -> EdgeMap {
    let (w, h) = (spec.width, spec.height);
    let mut rng = SplitMix64::new(spec.seed ^ 0xD1B5_4A32_D192_ED03);
    let cap = (DIRT_AREA_CAP * (w * h) as f64).floor() as usize;
    let mut mask = EdgeMap::empty(w, h);
    let mut covered = 0;
    let blotches = rng.range(3, 9);
    let max_r = (h / 8).max(3) as u64;
    for _ in 0..blotches {
        let cx = rng.range(0, w as u64) as isize;
        let cy = rng.range(0, h as u64) as isize;
        let r = rng.range(2, max_r + 1) as isize;
        let mut disc = Vec::new();
        for y in (cy - r).max(0)..=(cy + r).min(h as isize - 1) {
            for x in (cx - r).max(0)..=(cx + r).min(w as isize - 1) {
                let inside = (x - cx).pow(2) + (y - cy).pow(2) <= r * r;
                if inside && !mask.get(x as usize, y as usize) {
                    disc.push((x as usize, y as usize));
                }
            }
        }
        if covered + disc.len() > cap {
            continue;
        }
        covered += disc.len();
        for (x, y) in disc {
            mask.set(x, y, true);
        }
    }
    mask
}

/// Render `spec` and its ground-truth edge map.
pub fn render_plate(spec: &PlateSpec) -> Result<(GrayImage, EdgeMap)> {
    let ink = spec.ink_mask()?;
    let (w, h) = (spec.width, spec.height);
    let mut truth = boundary_pixels(&ink);
    let mut image = GrayImage::from_fn(w, h, |x, y| {
        if ink.get(x, y) {
            spec.foreground
        } else {
            spec.background
        }
    });

    if spec.style == PlateStyle::Dirty {
        let dirt = dirt_mask(spec);
        let mid = 0.5 * (spec.foreground + spec.background);
        image = GrayImage::from_fn(
            w,
            h,
            |x, y| if dirt.get(x, y) { mid } else { image.get(x, y) },
        );
        truth = EdgeMap::from_fn(w, h, |x, y| truth.get(x, y) && !dirt.get(x, y));
    }

    if spec.blur_sigma > 0.0 {
        let radius = (3.0 * spec.blur_sigma).ceil() as usize;
        let kernel = Kernel::gaussian(2 * radius + 1, spec.blur_sigma)?;
        image = convolve(&image, &kernel).clamped();
    }

    if spec.style == PlateStyle::Faded {
        let mid = 0.5 * (spec.foreground + spec.background);
        image = image.map(|v| mid + FADE_FACTOR * (v - mid));
    }

    Ok((image, truth))
}

/// Seeded plate text drawn from [`ALPHABET`].
pub fn random_plate_text(seed: u64, len: usize) -> String {
    let alphabet: Vec<char> = ALPHABET.chars().collect();
    let mut rng = SplitMix64::new(seed ^ 0x5DEE_CE66_D1CE_4E5B);
    (0..len)
        .map(|_| alphabet[rng.range(0, alphabet.len() as u64) as usize])
        .collect()
}

/// One `id<TAB>fields` line per plate.
pub fn write_manifest<'a>(entries: impl IntoIterator<Item = (&'a str, &'a PlateSpec)>) -> String {
    entries
        .into_iter()
        .map(|(id, spec)| format!("{id}\t{}\n", spec.to_fields()))
        .collect()
}

pub fn parse_manifest(text: &str) -> Result<Vec<(String, PlateSpec)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, line)| {
            let (id, fields) = line.split_once('\t').ok_or_else(|| Error::Config {
                line: i + 1,
                message: "manifest line needs id<TAB>fields".into(),
            })?;
            let spec = fields.parse().map_err(|e: Error| Error::Config {
                line: i + 1,
                message: e.to_string(),
            })?;
            Ok((id.to_string(), spec))
        })
        .collect()
}

use font8x8::{UnicodeFonts, BASIC_FONTS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::raster::Image;

/// Characters drawn by [`gen_char_target`].
pub const GLYPHS: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

/// Default glyph height in high-resolution pixels (one font pixel per
/// target pixel).
pub const DEFAULT_GLYPH_HEIGHT: usize = 8;

/// One placed character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Glyph {
    pub code: char,
    /// Top-left corner `(row, col)`.
    pub position: (usize, usize),
}

/// Random-character target: ink 1 on background 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CharTarget {
    pub image: Image,
    pub glyphs: Vec<Glyph>,
    pub n_chars: usize,
    pub seed: u64,
}

/// `n_chars` random characters at random non-clipping positions, with
/// [`DEFAULT_GLYPH_HEIGHT`].
pub fn gen_char_target(dims: (usize, usize), n_chars: usize, seed: u64) -> Result<CharTarget> {
    gen_char_target_with(dims, n_chars, seed, DEFAULT_GLYPH_HEIGHT)
}

/// As [`gen_char_target`] with an explicit glyph height; the 8x8 bitmap is
/// scaled by nearest neighbour to a square glyph of that size.
pub fn gen_char_target_with(
    dims: (usize, usize),
    n_chars: usize,
    seed: u64,
    glyph_height: usize,
) -> Result<CharTarget> {
    let (rows, cols) = dims;
    if rows == 0 || cols == 0 {
        return Err(invalid("target dims must be positive"));
    }
    if glyph_height == 0 || glyph_height > rows || glyph_height > cols {
        return Err(invalid(format!(
            "glyph of height {glyph_height} does not fit a {rows}x{cols} target"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet: Vec<char> = GLYPHS.chars().collect();
    let mut image = Image::zeros(rows, cols);
    let mut glyphs = Vec::with_capacity(n_chars);
    for _ in 0..n_chars {
        let code = alphabet[rng.gen_range(0..alphabet.len())];
        let r0 = rng.gen_range(0..=rows - glyph_height);
        let c0 = rng.gen_range(0..=cols - glyph_height);
        stamp(&mut image, code, (r0, c0), glyph_height);
        glyphs.push(Glyph {
            code,
            position: (r0, c0),
        });
    }
    Ok(CharTarget {
        image,
        glyphs,
        n_chars,
        seed,
    })
}

/// Renders `text` on one line starting at `origin`, clipping at the border.
pub fn render_text(
    dims: (usize, usize),
    text: &str,
    origin: (usize, usize),
    glyph_height: usize,
) -> Result<Image> {
    if glyph_height == 0 {
        return Err(invalid("glyph height must be positive"));
    }
    let mut image = Image::zeros(dims.0, dims.1);
    for (k, ch) in text.chars().enumerate() {
        stamp(
            &mut image,
            ch,
            (origin.0, origin.1 + k * glyph_height),
            glyph_height,
        );
    }
    Ok(image)
}

fn stamp(image: &mut Image, code: char, (r0, c0): (usize, usize), size: usize) {
    let Some(bitmap) = BASIC_FONTS.get(code) else {
        return;
    };
    for r in 0..size {
        let bits = bitmap[r * 8 / size];
        for c in 0..size {
            let (i, j) = (r0 + r, c0 + c);
            if i < image.rows() && j < image.cols() && bits >> (c * 8 / size) & 1 == 1 {
                image[(i, j)] = 1.0;
            }
        }
    }
}

/// USAF-style chart: for each bar width `s` a group of three vertical bars
/// (each `s x 5s`, gaps `s`) next to three horizontal bars, groups laid out
/// left to right with a `2s` margin.
pub fn gen_bar_target(dims: (usize, usize), group_scales: &[usize]) -> Result<Image> {
    let (rows, cols) = dims;
    if rows == 0 || cols == 0 {
        return Err(invalid("target dims must be positive"));
    }
    let mut image = Image::zeros(rows, cols);
    let mut col = 0usize;
    for &s in group_scales {
        if s == 0 {
            return Err(invalid("bar width must be positive"));
        }
        let margin = 2 * s;
        // vertical triple: 5s wide, 5s tall; horizontal triple beside it
        let width = margin + 5 * s + s + 5 * s;
        let height = margin + 5 * s;
        if col + width > cols || height > rows {
            return Err(invalid(format!(
                "bar group of width {s} does not fit a {rows}x{cols} target"
            )));
        }
        let top = margin;
        let left = col + margin;
        for b in 0..3 {
            for i in top..top + 5 * s {
                for j in left + 2 * b * s..left + (2 * b + 1) * s {
                    image[(i, j)] = 1.0;
                }
            }
        }
        let left_h = left + 6 * s;
        for b in 0..3 {
            for i in top + 2 * b * s..top + (2 * b + 1) * s {
                for j in left_h..left_h + 5 * s {
                    image[(i, j)] = 1.0;
                }
            }
        }
        col += width;
    }
    Ok(image)
}

//! Lazily computed verdicts shared by `report` and `scan`.

use std::sync::Arc;

use anyhow::{bail, Result};
use syzygy_core::algebra::FiniteLocalAlgebra;
use syzygy_core::koszul::is_hypersurface;
use syzygy_core::structure::{
    burch_depth_zero_test, exceptional_test, golod_check, is_fibre_product, star_property_scan,
    ExceptionalReport, GolodReport, StarScanReport, SyzygyTower,
};
use syzygy_core::Field;

#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub precision: usize,
    pub star: usize,
    pub exceptional: usize,
    pub seed: u64,
}

pub struct Analysis<F: Field> {
    pub tower: SyzygyTower<F>,
    pub bounds: Bounds,
    golod: Option<GolodReport>,
    star: Option<StarScanReport>,
    exceptional: Option<ExceptionalReport>,
    fibre: Option<Option<bool>>,
}

impl<F: Field> Analysis<F> {
    pub fn new(a: &Arc<FiniteLocalAlgebra<F>>, bounds: Bounds) -> Self {
        Analysis {
            tower: SyzygyTower::new(a),
            bounds,
            golod: None,
            star: None,
            exceptional: None,
            fibre: None,
        }
    }

    pub fn algebra(&self) -> &Arc<FiniteLocalAlgebra<F>> {
        self.tower.algebra()
    }

    pub fn golod(&mut self) -> Result<&GolodReport> {
        if self.golod.is_none() {
            self.golod = Some(golod_check(&mut self.tower, self.bounds.precision)?);
        }
        Ok(self.golod.as_ref().unwrap())
    }

    pub fn star(&mut self) -> Result<&StarScanReport> {
        if self.star.is_none() {
            let b = self.bounds;
            self.star = Some(star_property_scan(&mut self.tower, b.star, b.seed)?);
        }
        Ok(self.star.as_ref().unwrap())
    }

    /// The star verdict if it has been computed already.
    pub fn known_star(&self) -> Option<bool> {
        self.star.as_ref().and_then(star_verdict)
    }

    pub fn exceptional(&mut self) -> &ExceptionalReport {
        if self.exceptional.is_none() {
            self.exceptional = Some(exceptional_test(&mut self.tower, self.bounds.exceptional));
        }
        self.exceptional.as_ref().unwrap()
    }

    pub fn fibre(&mut self) -> Result<Option<bool>> {
        if self.fibre.is_none() {
            self.fibre = Some(is_fibre_product(self.tower.algebra(), self.bounds.seed)?);
        }
        Ok(self.fibre.unwrap())
    }

    /// `None` when the verdict cannot be decided over this field.
    pub fn verdict(&mut self, name: &str) -> Result<Option<bool>> {
        Ok(match name {
            "golod" => Some(self.golod()?.is_golod()),
            "star" => star_verdict(self.star()?),
            "fibre" => self.fibre()?,
            "burch" => Some(burch_depth_zero_test(&mut self.tower)),
            "exceptional" => Some(self.exceptional().exceptional),
            "gorenstein" => Some(self.algebra().is_gorenstein()),
            "hypersurface" => Some(is_hypersurface(self.algebra())),
            _ => bail!("unknown verdict `{name}`"),
        })
    }
}

fn star_verdict(r: &StarScanReport) -> Option<bool> {
    if r.holds() {
        Some(true)
    } else if r.undecided.is_empty() {
        Some(false)
    } else {
        None
    }
}

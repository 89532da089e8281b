//! Per-record invariant reports.
//!
//! The leading columns `id,r23,r13,r12,r01,r02,r03,sign,oriented` follow the
//! root-form input schema, so a report can be fed back to `synth`.

use rootforms::projection::ProjectedForm;
use rootforms::{project_root_form, Invariants, LatticeSign, RootForm, TrianglePoint};

use crate::output::{Cell, Table};
use crate::records::FORM_FIELDS;

#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub id: String,
    pub root_form: RootForm,
    pub oriented_root_form: RootForm,
    pub sign: LatticeSign,
    pub special: Vec<&'static str>,
    pub dc7: [f64; 7],
    pub projected: ProjectedForm,
}

impl InvariantReport {
    pub fn new(id: &str, inv: &Invariants) -> rootforms::Result<Self> {
        Ok(InvariantReport {
            id: id.to_string(),
            root_form: inv.root_form,
            oriented_root_form: inv.oriented_root_form,
            sign: inv.sign,
            special: inv.special.names(),
            dc7: inv.dc7.0,
            projected: project_root_form(&inv.root_form)?,
        })
    }

    /// The form printed in the `r..` columns.
    pub fn primary(&self, oriented: bool) -> &RootForm {
        if oriented {
            &self.oriented_root_form
        } else {
            &self.root_form
        }
    }

    pub fn row(&self, oriented: bool) -> Vec<Cell> {
        let mut row = vec![Cell::Text(self.id.clone())];
        row.extend(self.primary(oriented).r.map(Cell::Num));
        row.push(Cell::Text(self.sign.to_string()));
        row.push(Cell::Bool(oriented));
        row.extend(self.oriented_root_form.r.map(Cell::Num));
        row.push(Cell::Text(self.special.join(";")));
        row.extend(self.dc7.map(Cell::Num));
        row.extend(point_cells(self.projected.qt));
        row.extend(point_cells(self.projected.ft));
        row
    }
}

pub fn report_table() -> Table {
    let mut h: Vec<String> = std::iter::once("id").chain(FORM_FIELDS).map(String::from).collect();
    h.extend(["sign", "oriented"].map(String::from));
    h.extend(FORM_FIELDS.map(|f| format!("o{f}")));
    h.push("special".into());
    h.extend((1..=7).map(|k| format!("dc7_{k}")));
    h.extend(["qt_x", "qt_y", "ft_x", "ft_y"].map(String::from));
    Table::new(h)
}

pub fn point_cells(p: Option<TrianglePoint>) -> [Cell; 2] {
    p.map_or([Cell::Empty, Cell::Empty], |p| [Cell::Num(p.x), Cell::Num(p.y)])
}

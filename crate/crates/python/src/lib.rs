use pyo3::prelude::*;

#[pymodule]
fn compound_render_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}

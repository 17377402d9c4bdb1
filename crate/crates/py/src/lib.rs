use pyo3::prelude::*;

#[pymodule]
fn bnmd(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}

use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &std::ffi::CStr) {
    Python::initialize();
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(jumpact_py::jumpact_module)(py);
        let scope = PyDict::new(py);
        scope.set_item("jp", module).unwrap();
        if let Err(e) = py.run(code, Some(&scope), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn simulate_and_estimate() {
    run(cr"
times, prices = jp.simulate(3, beta=1.4, delta_inv=500)
r = jp.estimate(times, prices, true_beta=1.4)
assert r.ci_low <= r.beta_hat <= r.ci_high <= 4
assert r.estimate == r.beta_hat and r.beta_bar is None
assert r.n_obs == len(times) - 1 and r.std_stat is not None
d = jp.estimate(times, prices, debias=True, mc_size=1000)
assert d.beta_bar is not None and d.estimate == d.beta_bar
");
}

#[test]
fn errors_map_to_python_exceptions() {
    run(cr"
for call, exc in [
    (lambda: jp.sample_stable(2.5, 3, 0), ValueError),
    (lambda: jp.estimate([0.0, 0.5, 1.0], [1.0, 2.0, 3.0]), ValueError),
    (lambda: jp.run_study('[model]\nbta = 1\n'), ValueError),
    (lambda: jp.simulate(1, delta_inv=-1.0), ValueError),
]:
    try:
        call()
    except exc:
        pass
    else:
        raise AssertionError('no error')
");
}

#[test]
fn constants_and_study() {
    run(cr"
c = jp.stable_constants(0.5, 1.3, mc_size=200000)
assert set(c) == {'a_beta', 'mu_p_beta', 'kappa_p_beta', 'kappa_beta_beta', 'c_p_beta'}
v = jp.asymptotic_variance(1.3, 0.5, c['kappa_beta_beta'], c['c_p_beta'])
assert abs(v - 5.4853) / 5.4853 < 0.01, v
cfg = '[estimator]\nmc_size = 10000\n[study]\nbetas = 1.5\nrhos = 0.5, 2\ndelta_inv = 1000\n'
a = jp.run_study(cfg, reps=10, seed=4, workers=1)
b = jp.run_study(cfg, reps=10, seed=4, workers=3)
assert [(r.rho, r.mean, r.emp_var) for r in a] == [(r.rho, r.mean, r.emp_var) for r in b]
assert all(len(r.qq) == 10 - r.n_failed for r in a)
");
}

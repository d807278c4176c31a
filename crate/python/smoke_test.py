"""Build the extension with cargo, import it and exercise each entry point.

Usage: python3 python/smoke_test.py
"""

import importlib.util
import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "quasistable-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libpyquasistable.so"
    if not lib.exists():
        sys.exit(f"missing {lib}")
    dest = pathlib.Path(tempfile.mkdtemp()) / "pyquasistable.so"
    shutil.copy(lib, dest)
    spec = importlib.util.spec_from_file_location("pyquasistable", dest)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    qs = build()
    cm = qs.ComplexMass(1.0, 0.2)
    assert abs(cm.sqrt_s() - complex(1.0, -0.1)) < 1e-15

    bounds = qs.spectral_bounds(cm)
    assert abs(bounds["k2"] - 0.1) < 1e-15 and bounds["k1"] == "-inf", bounds
    assert qs.sampled_bounds([complex(-1, -1)])["k1"] == -1.0

    assert qs.classify_interval(1.0, 0.5, 0.0, 0.0) == "in_forward_cone"
    assert qs.classify_interval(0.0, 1.0, 0.0, 0.0) == "spacelike"

    norms = qs.evolve_norms(cm, [0.0, 1.0, 5.0])
    assert norms[0] > norms[1] > norms[2] > 0.0, norms

    assert qs.dichotomy_probe([0.0, 1.0, 2.0], [0.0, 0.0, 0.0])["verdict"] == "identically_zero"

    errors = qs.validate_config('{"experiment": "evolve", "complex_mass": {"mass": 1, "width": -1}}')
    assert any(e.startswith("complex_mass.width") for e in errors), errors

    with tempfile.TemporaryDirectory() as out:
        config = (ROOT / "configs" / "spectrum_check.json").read_text()
        summary = qs.run_config(config, out)
        assert summary["exit_code"] == 0 and summary["verdict"] == "sentinel_valid", summary
        manifest = json.loads((pathlib.Path(out) / "manifest.json").read_text())
        assert manifest["outputs"] == ["spectrum_check.csv", "spectrum_check.summary.json"]

    checks = qs.selftest(3)
    assert all(c["passed"] for c in checks), checks
    print(f"pyquasistable {qs.__version__}: smoke test passed")


if __name__ == "__main__":
    main()

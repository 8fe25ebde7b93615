"""Generate bindings for a templated sort, show them, then build and run them.

    python3 demos/sort_walkthrough.py [output-dir]
"""

import random
import sys
from pathlib import Path

from bindforge import generate
from bindforge.harness import PASS, Fixture, detect_toolchain, run_fixture

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "algorithm"


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else Path("sort_bindings")
    interface = FIXTURE / "algorithm.i"
    pair = generate(interface.read_text())
    out.mkdir(parents=True, exist_ok=True)
    (out / pair.c_filename).write_text(pair.c_source)
    (out / pair.fortran_filename).write_text(pair.fortran_source)
    print(f"wrote {out / pair.c_filename} and {out / pair.fortran_filename}\n")
    print(pair.plan.dump())

    toolchain = detect_toolchain()
    if toolchain is None:
        print("no C++/Fortran compiler pair found; stopping before the build")
        return 0
    values = [random.uniform(-1, 1) for _ in range(8)]
    stdin = f"{len(values)}\n" + "".join(f"{v!r}\n" for v in values)
    fixture = Fixture("algorithm", interface, (FIXTURE / "sort_driver.f90").read_text(),
                      lambda stdout: [], stdin=stdin)
    result = run_fixture(fixture, toolchain)
    print(f"built with {toolchain.describe()}: {result.status}")
    if result.status != PASS:
        print(result.log)
        return 1
    print("Fortran program output:")
    print(result.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))

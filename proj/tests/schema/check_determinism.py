"""Two CLI runs with the same config and seed must write identical files."""
import hashlib
import pathlib
import subprocess
import sys
import tempfile

RUNS = [
    ["verify", "--quick", "--seed", "7"],
    ["zeros", "--k", "2", "--n", "12", "--t", "0.3"],
    ["spectra", "--k", "2", "--t", "0.2", "--phi", "1.0", "--n", "10", "--depth", "8",
     "--birkhoff-length", "5000", "--birkhoff-seeds", "4", "--seed", "3"],
]


def digest(exe: str, args: list[str], workers: str, out: pathlib.Path) -> str:
    subprocess.run([exe, *args, "--workers", workers, "--out", str(out)], check=True, capture_output=True)
    return hashlib.sha256(out.read_bytes()).hexdigest()


def main() -> int:
    exe = sys.argv[1]
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp) / "artifact"
        for args in RUNS:
            hashes = {digest(exe, args, w, out) for w in ("1", "1", "3")}
            status = "ok  " if len(hashes) == 1 else "FAIL"
            failures += len(hashes) != 1
            print(f"{status} {' '.join(args)}: {sorted(hashes)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

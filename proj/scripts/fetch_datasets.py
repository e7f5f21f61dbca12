#!/usr/bin/env python3
"""Download the reference datasets into data/.

football, polbooks, polblogs come from Mark Newman's network collection as
zipped GML; cora comes from the LINQS collection as a tarball that we convert
to a plain edge list plus a label file. Files already present are kept unless
--force is given, so the script is safe to re-run.
"""

import argparse
import io
import re
import sys
import tarfile
import urllib.request
import zipfile
from pathlib import Path

NETDATA_MIRRORS = [
    "https://websites.umich.edu/~mejn/netdata/",
    "http://www-personal.umich.edu/~mejn/netdata/",
]
CORA_URLS = [
    "https://linqs-data.soe.ucsc.edu/public/lbc/cora.tgz",
]

# node / edge-record counts we expect; a mismatch usually means a truncated
# download or an upstream format change, so it is reported but not fatal
EXPECTED = {
    "football": (115, 613),
    "polbooks": (105, 441),
    "polblogs": (1490, 19090),
}


def fetch(urls, what):
    last = None
    for url in urls:
        print(f"  fetching {url}")
        try:
            with urllib.request.urlopen(url, timeout=120) as resp:
                return resp.read()
        except OSError as err:
            print(f"    failed: {err}", file=sys.stderr)
            last = err
    sys.exit(f"error: could not download {what} ({last})")


def gml_counts(text):
    nodes = len(re.findall(r"\bnode\s*\[", text))
    edges = len(re.findall(r"\bedge\s*\[", text))
    return nodes, edges


def fetch_gml(name, out_dir, force):
    out = out_dir / f"{name}.gml"
    if out.exists() and not force:
        print(f"{out} already present, skipping")
        return
    print(f"{name}:")
    blob = fetch([base + f"{name}.zip" for base in NETDATA_MIRRORS], f"{name}.zip")
    with zipfile.ZipFile(io.BytesIO(blob)) as zf:
        member = next(n for n in zf.namelist() if n.endswith(f"{name}.gml"))
        gml = zf.read(member).decode("utf-8", errors="replace")
    out.write_text(gml)
    nodes, edges = gml_counts(gml)
    print(f"  wrote {out}: {nodes} nodes, {edges} edge records")
    want = EXPECTED[name]
    if (nodes, edges) != want:
        print(f"  warning: expected {want[0]} nodes / {want[1]} edge records", file=sys.stderr)


def fetch_cora(out_dir, force):
    edges_out = out_dir / "cora.edges"
    labels_out = out_dir / "cora.labels"
    if edges_out.exists() and labels_out.exists() and not force:
        print(f"{edges_out} and {labels_out} already present, skipping")
        return
    print("cora:")
    blob = fetch(CORA_URLS, "cora.tgz")
    with tarfile.open(fileobj=io.BytesIO(blob), mode="r:gz") as tf:
        def read_member(suffix):
            for m in tf.getmembers():
                if m.name.endswith(suffix):
                    return tf.extractfile(m).read().decode()
            sys.exit(f"error: no {suffix} inside cora.tgz")

        cites = read_member("cora.cites")
        content = read_member("cora.content")

    cited = set()
    edge_lines = []
    for line in cites.splitlines():
        parts = line.split()
        if len(parts) != 2:
            continue
        edge_lines.append(f"{parts[0]} {parts[1]}")
        cited.update(parts)

    label_lines = []
    dropped = 0
    for line in content.splitlines():
        parts = line.split()
        if len(parts) < 2:
            continue
        paper, label = parts[0], parts[-1]
        if paper in cited:
            label_lines.append(f"{paper} {label}")
        else:
            dropped += 1  # paper with no citations: not representable in an edge list

    edges_out.write_text("\n".join(edge_lines) + "\n")
    labels_out.write_text("\n".join(label_lines) + "\n")
    print(f"  wrote {edges_out}: {len(edge_lines)} citation records")
    print(f"  wrote {labels_out}: {len(label_lines)} labelled papers"
          + (f" ({dropped} isolated papers dropped)" if dropped else ""))
    if len(edge_lines) != 5429 or len(label_lines) + dropped != 2708:
        print("  warning: expected 5429 citations over 2708 papers", file=sys.stderr)


def main():
    all_names = ["football", "polbooks", "polblogs", "cora"]
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", metavar="NAME",
                    help=f"datasets to fetch: {', '.join(all_names)} (default: all)")
    ap.add_argument("--out", type=Path,
                    default=Path(__file__).resolve().parent.parent / "data",
                    help="output directory (default: <repo>/data)")
    ap.add_argument("--force", action="store_true", help="re-download existing files")
    args = ap.parse_args()

    names = args.names or all_names
    for name in names:
        if name not in all_names:
            ap.error(f"unknown dataset '{name}'")
    args.out.mkdir(parents=True, exist_ok=True)
    for name in names:
        if name == "cora":
            fetch_cora(args.out, args.force)
        else:
            fetch_gml(name, args.out, args.force)


if __name__ == "__main__":
    main()

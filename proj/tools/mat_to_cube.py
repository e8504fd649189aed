#!/usr/bin/env python3
"""Convert a hyperspectral scene stored as MATLAB .mat files into the cube
and ground-truth files read by hdmrge.

    mat_to_cube.py Indian_pines_corrected.mat Indian_pines_gt.mat out/indian_pines
writes out/indian_pines.dat and out/indian_pines_gt.dat.
"""

import argparse
import pathlib
import sys

import numpy as np
from scipy.io import loadmat


def only_array(path, ndim):
    arrays = [v for k, v in loadmat(path).items() if not k.startswith("__") and getattr(v, "ndim", 0) == ndim]
    if len(arrays) != 1:
        sys.exit(f"{path}: expected exactly one {ndim}-D array, found {len(arrays)}")
    return arrays[0]


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("cube", type=pathlib.Path)
    parser.add_argument("ground_truth", type=pathlib.Path)
    parser.add_argument("out_stem", type=pathlib.Path)
    args = parser.parse_args()

    cube = only_array(args.cube, 3)
    gt = only_array(args.ground_truth, 2)
    rows, cols, bands = cube.shape
    if gt.shape != (rows, cols):
        sys.exit(f"ground truth shape {gt.shape} does not match cube {cube.shape}")

    args.out_stem.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out_stem.with_name(args.out_stem.name + ".dat"), "wb") as f:
        f.write(f"{rows}\n{cols}\n{bands}\n".encode())
        f.write(np.ascontiguousarray(cube.transpose(2, 0, 1), dtype="<f4").tobytes())
    with open(args.out_stem.with_name(args.out_stem.name + "_gt.dat"), "wb") as f:
        f.write(f"{rows}\n{cols}\n".encode())
        f.write(np.ascontiguousarray(gt, dtype="<u2").tobytes())


if __name__ == "__main__":
    main()

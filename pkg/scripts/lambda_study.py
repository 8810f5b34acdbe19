#!/usr/bin/env python3
"""Map the generator parameter that matches path-strength variability.

For a grid of mean shortest paths mu and coefficients of variability, solve
for the lambda at which the proximity-space variability equals the
distance-space one.  Reproduces the band lambda in [0.8, 1.9] for matched
CVs up to 0.4, with lambda -> 1 for small fluctuations.

Usage: python scripts/lambda_study.py
"""

import numpy as np

from distclosure import find_lambda


def main():
    cvs = [0.1, 0.2, 0.3, 0.4]
    mus = [5.0, 10.0, 20.0, 30.0, 50.0]
    print("lambda_opt for matched cv_d = cv_p")
    header = "mu \\ cv" + "".join(f"{cv:>10.2f}" for cv in cvs)
    print(header)
    for mu in mus:
        row = [f"{mu:>7g}"]
        for cv in cvs:
            row.append(f"{find_lambda(mu, cv, cv):>10.4f}")
        print("".join(row))


if __name__ == "__main__":
    main()

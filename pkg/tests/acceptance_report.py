"""Collects one line per acceptance criterion for the terminal summary."""

LINES = {}


def report(number, passed, detail):
    line = f"CRITERION {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    LINES[number] = line
    print(line)
    return passed

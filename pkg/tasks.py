from invoke import task


@task
def test(c, slow=False):
    """Run the test suite; exhaustive searches only with --slow"""
    cmd = "pytest"
    if not slow:
        cmd += ' -m "not slow"'
    c.run(cmd, pty=True)


@task
def selftest(c, slow=False):
    """Run the reference corpus through the tropcp CLI"""
    cmd = "python manage.py tropcp selftest"
    if slow:
        cmd += " --include-slow"
    c.run(cmd, pty=True)


@task
def gen(c, graph, seed=0, count=1, out_dir="data/generated"):
    """Write ``count`` random normalized matrices for the pattern in ``graph``"""
    c.run(f"mkdir -p {out_dir}")
    for offset in range(count):
        s = seed + offset
        c.run(
            f"python manage.py tropcp gen {graph} --seed {s} --out {out_dir}/seed_{s}.tmat",
            hide="out",
        )

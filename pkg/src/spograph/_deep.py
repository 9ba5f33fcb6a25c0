"""Run recursive algorithms on a thread with a large C stack.

Unary numerals such as 8! = 40320 nest tens of thousands of constructor
nodes; Python 3.10 recursion uses the C stack, so public entry points hop
onto a worker thread sized for that depth.
"""
from __future__ import annotations

import contextvars
import functools
import sys
import threading

STACK_SIZE = 1 << 30
RECURSION_LIMIT = 400_000

_local = threading.local()


def deep(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        if getattr(_local, "active", False):
            return fn(*args, **kwargs)
        return _run_deep(fn, args, kwargs)

    return wrapper


def _run_deep(fn, args, kwargs):
    result = {}
    ctx = contextvars.copy_context()

    def target():
        _local.active = True
        try:
            result["value"] = ctx.run(fn, *args, **kwargs)
        except BaseException as exc:  # re-raised on the calling thread
            result["error"] = exc

    if sys.getrecursionlimit() < RECURSION_LIMIT:
        sys.setrecursionlimit(RECURSION_LIMIT)
    old = threading.stack_size()
    threading.stack_size(STACK_SIZE)
    try:
        worker = threading.Thread(target=target, name="spograph-deep")
        worker.start()
    finally:
        threading.stack_size(old)
    worker.join()
    if "error" in result:
        raise result["error"]
    return result["value"]

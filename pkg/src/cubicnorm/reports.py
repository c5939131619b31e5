"""Pass/fail reports shared by the verification suites."""

from __future__ import annotations


class CheckItem:
    """One named check with its outcome and an optional detail string."""

    __slots__ = ("name", "passed", "detail")

    def __init__(self, name, passed, detail=""):
        self.name = name
        self.passed = bool(passed)
        self.detail = detail

    def __repr__(self):
        status = "PASS" if self.passed else "FAIL"
        tail = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.name}{tail}"


class CheckReport:
    """An ordered collection of check items under a title."""

    def __init__(self, title, items=None):
        self.title = title
        self.items = list(items or [])

    def add(self, name, passed, detail=""):
        self.items.append(CheckItem(name, passed, detail))

    def extend(self, other):
        for item in other.items:
            self.items.append(
                CheckItem(f"{other.title}: {item.name}", item.passed, item.detail)
            )

    @property
    def ok(self):
        return all(item.passed for item in self.items)

    @property
    def failures(self):
        return [item for item in self.items if not item.passed]

    def lines(self):
        out = [f"== {self.title} =="]
        out.extend(repr(item) for item in self.items)
        out.append(f"-- {self.title}: {'OK' if self.ok else 'FAILED'}")
        return out

    def __str__(self):
        return "\n".join(self.lines())

    def __repr__(self):
        n_fail = len(self.failures)
        return f"CheckReport({self.title!r}, {len(self.items)} checks, {n_fail} failed)"

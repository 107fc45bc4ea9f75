import pytest

from branchdepth import kernels


@pytest.fixture(params=["compiled", "python"])
def backend(request, monkeypatch):
    """Run a test once per kernel implementation."""
    if request.param == "compiled":
        if kernels.compiled_kernels is None:
            pytest.skip("compiled kernels not built")
        impl = kernels.compiled_kernels
    else:
        impl = kernels.python_kernels
    monkeypatch.setattr(kernels, "gf_rank", impl.gf_rank)
    monkeypatch.setattr(kernels, "leaf_search", impl.leaf_search)
    return request.param

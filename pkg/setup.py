from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; openqs.kernels falls back to numpy
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("openqs._ckernels", ["src/openqs/_ckernels.pyx"], extra_compile_args=["-O3"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)

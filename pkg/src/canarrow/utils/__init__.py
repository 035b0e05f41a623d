from .multiprocess import multiprocess_iter

__all__ = ["multiprocess_iter"]

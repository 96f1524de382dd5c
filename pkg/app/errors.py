from typing import Optional


class MBError(ValueError):
	"""Root of every input or structural error raised by the engine."""


class DimensionCapError(MBError):
	def __init__(self, dim: int, cap: int, what: str = "object") -> None:
		self.dim = dim
		self.cap = cap
		super().__init__(f"{what} needs dimension {dim}, above the configured cap {cap}")


class ParameterError(MBError):
	pass


class CellError(MBError):
	def __init__(self, cell: str, where: str = "") -> None:
		self.cell = cell
		suffix = f" in {where}" if where else ""
		super().__init__(f"unknown cell {cell!r}{suffix}")


class StructureError(MBError):
	"""Face data that does not describe a simplicial set."""


class DecorationError(MBError):
	pass


class MapError(MBError):
	pass


class DocumentError(MBError):
	def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None, ident: Optional[str] = None) -> None:
		self.line = line
		self.column = column
		self.ident = ident
		where = ""
		if line is not None:
			where = f" (line {line}, column {column})"
		elif ident:
			where = f" (at {ident})"
		super().__init__(message + where)


class CertificateVersionError(DocumentError):
	pass


class DerivationError(MBError):
	def __init__(self, reason: str, step: Optional[int] = None) -> None:
		self.reason = reason
		self.step = step
		prefix = f"step {step}: " if step is not None else ""
		super().__init__(prefix + reason)

import asyncio
import logging
from concurrent.futures import Executor, ProcessPoolExecutor
from typing import Dict, List, Optional

from ..errors import DimensionCapError, MBError
from ..state import runtime
from .pushout_product import CaseJob, CaseReport, verify_case


logger = logging.getLogger(__name__)


def run_job(job: CaseJob, overrides: Optional[Dict[str, object]] = None) -> CaseReport:
	"""Run one case; also the entry point inside worker processes."""
	runtime.set_from_dict(overrides)
	try:
		return verify_case(job.cofibration, job.anodyne, job.cap, job.budget)
	except DimensionCapError as exc:
		return CaseReport(job.cofibration, job.anodyne, "none", "unverified", reason=str(exc))
	except MBError as exc:
		return CaseReport(job.cofibration, job.anodyne, "none", "failed", reason=str(exc))


class CaseQueue:
	"""Pushout-product cases waiting for a worker; reports merge by case key."""

	def __init__(self, workers: int = 1):
		self.workers = max(1, int(workers))
		self.queue: asyncio.Queue = asyncio.Queue()
		self.results: Dict[str, CaseReport] = {}

	async def enqueue(self, job: CaseJob) -> None:
		await self.queue.put(job)

	async def _worker(self, idx: int, executor: Optional[Executor], overrides: Dict[str, object]) -> None:
		loop = asyncio.get_running_loop()
		while True:
			job: CaseJob = await self.queue.get()
			try:
				if executor is None:
					report = run_job(job, overrides)
				else:
					report = await loop.run_in_executor(executor, run_job, job, overrides)
				self.results[job.key] = report
				logger.debug("worker %d finished %s: %s", idx, job.key, report.verdict)
			except Exception as e:
				logger.error("worker %d crashed on %s: %s", idx, job.key, e)
				self.results[job.key] = CaseReport(job.cofibration, job.anodyne, "none", "failed", reason=f"worker error: {e}")
			finally:
				self.queue.task_done()

	async def run(self, jobs: List[CaseJob]) -> List[CaseReport]:
		for job in jobs:
			await self.enqueue(job)
		overrides = runtime.to_dict()
		executor = ProcessPoolExecutor(max_workers=self.workers) if self.workers > 1 else None
		tasks = [asyncio.create_task(self._worker(i, executor, overrides)) for i in range(self.workers)]
		try:
			await self.queue.join()
		finally:
			for t in tasks:
				t.cancel()
			await asyncio.gather(*tasks, return_exceptions=True)
			if executor is not None:
				executor.shutdown()
		# manifest order, whatever the schedule
		return [self.results[job.key] for job in jobs]


def run_jobs(jobs: List[CaseJob], workers: Optional[int] = None) -> List[CaseReport]:
	return asyncio.run(CaseQueue(workers or runtime.workers).run(jobs))

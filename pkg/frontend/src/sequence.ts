// Latest-wins request sequencing: every issued request gets a ticket and
// only the newest ticket's response may be applied, so the display always
// corresponds to the most recently requested parameters even when
// responses arrive out of order.

export class SequenceGuard {
  private latest = 0;

  issue(): number {
    this.latest += 1;
    return this.latest;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.latest;
  }

  /** Runs apply(result) only if the ticket is still the newest. */
  async guard<T>(ticket: number, work: Promise<T>, apply: (result: T) => void): Promise<boolean> {
    const result = await work;
    if (!this.isCurrent(ticket)) return false;
    apply(result);
    return true;
  }
}

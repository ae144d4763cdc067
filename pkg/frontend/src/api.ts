// Typed client for the hexblur JSON API.

export interface LayoutEcho {
  origin_x: number;
  origin_y: number;
  scale_x: number;
  scale_y: number;
}

export interface BinEntry {
  q: number;
  r: number;
  cx: number;
  cy: number;
  value: number;
}

export interface BinsResponse {
  layout: LayoutEcho;
  bins: BinEntry[];
  v_max: number;
  params: Record<string, number | string>;
}

export interface DatasetRecord {
  id: string;
  name: string;
  point_count: number;
  bounds: { min_x: number; max_x: number; min_y: number; max_y: number } | null;
  created_at: string;
}

export interface LabelEntry {
  label: string;
  weight: number;
}

export interface BlurQuery {
  sigma_x: number;
  sigma_y: number;
  epsilon?: number;
  mode?: "center_relative" | "mass_preserving";
  size_x?: number;
  size_y?: number;
  origin_x?: number;
  origin_y?: number;
}

export type FetchFn = (url: string, init?: RequestInit) => Promise<Response>;

function query(params: Record<string, number | string | undefined>): string {
  const parts: string[] = [];
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined) parts.push(`${key}=${encodeURIComponent(value)}`);
  }
  return parts.length ? `?${parts.join("&")}` : "";
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function expectJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = `HTTP ${resp.status}`;
    try {
      const body = await resp.json();
      detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail ?? body);
    } catch {
      // keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export function makeClient(baseUrl = "", fetchFn: FetchFn = fetch) {
  return {
    async uploadDataset(csv: string, name?: string): Promise<DatasetRecord> {
      const resp = await fetchFn(`${baseUrl}/api/datasets${query({ name })}`, {
        method: "POST",
        body: csv,
        headers: { "content-type": "text/csv" },
      });
      return expectJson<DatasetRecord>(resp);
    },
    async listDatasets(): Promise<DatasetRecord[]> {
      return expectJson(await fetchFn(`${baseUrl}/api/datasets`));
    },
    async fetchBins(id: string, layout: Partial<LayoutEcho> = {}): Promise<BinsResponse> {
      const q = query({
        size_x: layout.scale_x,
        size_y: layout.scale_y,
        origin_x: layout.origin_x,
        origin_y: layout.origin_y,
      });
      return expectJson(await fetchFn(`${baseUrl}/api/datasets/${id}/bins${q}`));
    },
    async fetchBlur(id: string, params: BlurQuery): Promise<BinsResponse> {
      const q = query({ ...params });
      return expectJson(await fetchFn(`${baseUrl}/api/datasets/${id}/blur${q}`));
    },
    async fetchLabels(
      id: string,
      q: number,
      r: number,
      k: number,
      layout: Partial<LayoutEcho> = {},
    ): Promise<LabelEntry[]> {
      const qs = query({
        k,
        size_x: layout.scale_x,
        size_y: layout.scale_y,
        origin_x: layout.origin_x,
        origin_y: layout.origin_y,
      });
      return expectJson(await fetchFn(`${baseUrl}/api/datasets/${id}/bins/${q}/${r}/labels${qs}`));
    },
    async colormaps(): Promise<string[]> {
      return expectJson(await fetchFn(`${baseUrl}/api/colormaps`));
    },
  };
}

export type Client = ReturnType<typeof makeClient>;

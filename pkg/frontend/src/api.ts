/** Thin typed client over the session service endpoints. */

import type {
  HighlightResponse,
  InconsistentDetail,
  QueryClass,
  QueryResponse,
  Sign,
  UploadResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class InconsistentSample extends Error {
  constructor(public detail: InconsistentDetail) {
    super(detail.error);
  }
}

export class ServiceError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function body(resp: Response): Promise<unknown> {
  try {
    return await resp.json();
  } catch {
    return {};
  }
}

export class ServiceClient {
  constructor(
    private base: string,
    private fetcher: FetchLike,
  ) {}

  private url(path: string): string {
    return this.base.replace(/\/$/, "") + path;
  }

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const resp = await this.fetcher(this.url(path), {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (resp.status === 422) {
      const payload = (await body(resp)) as { detail?: InconsistentDetail };
      throw new InconsistentSample(payload.detail ?? { error: "rejected" });
    }
    if (!resp.ok) {
      throw new ServiceError(resp.status, `service answered ${resp.status}`);
    }
    return body(resp);
  }

  async createSession(queryClass: QueryClass): Promise<string> {
    const out = (await this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ query_class: queryClass }),
    })) as { id: string };
    return out.id;
  }

  async uploadDocument(session: string, xml: string): Promise<UploadResponse> {
    return (await this.request(`/sessions/${session}/docs`, {
      method: "POST",
      body: JSON.stringify({ xml }),
    })) as UploadResponse;
  }

  async setAnnotation(
    session: string,
    docId: string,
    node: number,
    sign: Sign,
  ): Promise<void> {
    await this.request(
      `/sessions/${session}/docs/${docId}/nodes/${node}/annotation`,
      { method: "PUT", body: JSON.stringify({ sign }) },
    );
  }

  async clearAnnotation(session: string, docId: string, node: number): Promise<void> {
    await this.request(
      `/sessions/${session}/docs/${docId}/nodes/${node}/annotation`,
      { method: "DELETE" },
    );
  }

  async getQuery(session: string, queryClass: QueryClass): Promise<QueryResponse> {
    return (await this.request(
      `/sessions/${session}/query?query_class=${queryClass}`,
    )) as QueryResponse;
  }

  async getHighlight(session: string, docId: string): Promise<HighlightResponse> {
    return (await this.request(
      `/sessions/${session}/docs/${docId}/highlight`,
    )) as HighlightResponse;
  }
}
